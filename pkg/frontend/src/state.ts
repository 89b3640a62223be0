/**
 * Pure state transitions for the three panels. No DOM, no network:
 * everything here is directly unit-testable.
 */

import type { ImpactResponse } from "./api.js";

export const CROP_STATES = [
  "Andhra Pradesh",
  "Karnataka",
  "Kerala",
  "Pondicherry",
  "Tamil Nadu",
] as const;

export const SEASONS = ["Autumn", "Kharif", "Rabi", "Summer", "Winter"] as const;

export const DEFAULT_STATE = "Andhra Pradesh";
export const DEFAULT_SEASON = "Autumn";

// -- yield form ------------------------------------------------------------

export interface YieldFormState {
  areaText: string;
  state: string;
  season: string;
  /** Raw number bytes from the service; never present alongside `error`. */
  resultText?: string;
  error?: string;
}

export function defaultYieldForm(): YieldFormState {
  return { areaText: "", state: DEFAULT_STATE, season: DEFAULT_SEASON };
}

/** Area must parse to a finite real >= 0 for the form to be submittable. */
export function parseArea(text: string): number | null {
  const trimmed = text.trim();
  if (trimmed === "") return null;
  const value = Number(trimmed);
  return Number.isFinite(value) && value >= 0 ? value : null;
}

export function canSubmitYieldForm(state: YieldFormState): boolean {
  return parseArea(state.areaText) !== null;
}

export function withYieldResult(state: YieldFormState, rawNumber: string): YieldFormState {
  return { ...state, resultText: rawNumber, error: undefined };
}

export function withYieldError(state: YieldFormState, message: string): YieldFormState {
  return { ...state, resultText: undefined, error: message };
}

/** The rendered result line; the number is the service's exact bytes. */
export function yieldResultLine(rawNumber: string): string {
  return `Predicted Yield is ${rawNumber}`;
}

// -- what-if sliders ---------------------------------------------------------

export interface SliderBounds {
  min: number;
  max: number;
  step: number;
}

export const SLIDER_BOUNDS: Record<"temperature" | "humidity" | "pressure", SliderBounds> = {
  temperature: { min: 0, max: 50, step: 1 },
  humidity: { min: 0, max: 100, step: 1 },
  pressure: { min: 80, max: 150, step: 0.01 },
};

export interface WhatIfState {
  temperature: number;
  humidity: number;
  pressure: number;
  /** Impact responses, newest first; kept so scenarios can be compared. */
  history: ImpactResponse[];
  error?: string;
}

export function defaultWhatIf(): WhatIfState {
  return { temperature: 25, humidity: 60, pressure: 110, history: [] };
}

export function clampSlider(name: keyof typeof SLIDER_BOUNDS, value: number): number {
  const bounds = SLIDER_BOUNDS[name];
  return Math.min(bounds.max, Math.max(bounds.min, value));
}

export function withImpactResult(state: WhatIfState, result: ImpactResponse): WhatIfState {
  return { ...state, history: [result, ...state.history], error: undefined };
}

export function withWhatIfError(state: WhatIfState, message: string): WhatIfState {
  return { ...state, error: message };
}

/** Badge styling derives from the impact string the service sent. */
export function badgeKind(impact: "Positive" | "Negative"): "positive" | "negative" {
  return impact === "Negative" ? "negative" : "positive";
}

// -- leaf upload -------------------------------------------------------------

export interface LeafCardState {
  kind: "empty" | "result" | "error";
  className?: string;
  confidenceText?: string;
  species?: string;
  category?: string;
  ailment?: string;
  error?: string;
}

export function emptyLeafCard(): LeafCardState {
  return { kind: "empty" };
}

/**
 * Typed client for the prediction service.
 *
 * The UI never does prediction math and never re-formats numbers: every
 * displayed number is the exact byte sequence the service sent. To make
 * that possible the client keeps each raw response body and extracts
 * number lexemes from it with `numberLexeme` instead of relying on
 * JSON.parse + toString round-trips.
 */

import { apiUrl } from "./config.js";

export interface YieldResponse {
  predictedYieldText: string; // raw bytes of the JSON number
  modelVersion: string;
}

export interface ImpactResponse {
  expectedYieldText: string;
  impact: "Positive" | "Negative";
}

export interface LeafResponse {
  className: string;
  confidenceText: string;
  species: string;
  category: string;
  ailment: string;
}

/** Service-reported error (has a status and a machine code). */
export class ApiRequestError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiRequestError";
  }
}

/** Transport-level failure; the user may simply retry. */
export class NetworkError extends Error {
  constructor(cause: unknown) {
    super("could not reach the prediction service");
    this.name = "NetworkError";
    this.cause = cause;
  }
}

const NUMBER_LEXEME = String.raw`-?(?:0|[1-9]\d*)(?:\.\d+)?(?:[eE][+-]?\d+)?`;

/** Extract the exact textual form of a top-level numeric field. */
export function numberLexeme(rawJson: string, key: string): string | null {
  const pattern = new RegExp(`"${key}"\\s*:\\s*(${NUMBER_LEXEME})`);
  const match = pattern.exec(rawJson);
  return match ? match[1] : null;
}

async function readError(response: Response): Promise<ApiRequestError> {
  let code = "INTERNAL";
  let message = `request failed with status ${response.status}`;
  try {
    const body = (await response.json()) as { code?: string; message?: string };
    if (body.code) code = body.code;
    if (body.message) message = body.message;
  } catch {
    // non-JSON error body; keep the generic message
  }
  return new ApiRequestError(response.status, code, message);
}

async function postJson(path: string, payload: unknown, signal?: AbortSignal): Promise<string> {
  let response: Response;
  try {
    response = await fetch(apiUrl(path), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
      signal,
    });
  } catch (cause) {
    if (cause instanceof DOMException && cause.name === "AbortError") throw cause;
    throw new NetworkError(cause);
  }
  if (!response.ok) throw await readError(response);
  return response.text();
}

export async function predictYield(
  area: number,
  state: string,
  season: string,
  signal?: AbortSignal,
): Promise<YieldResponse> {
  const raw = await postJson("/api/v1/predict/yield", { area, state, season }, signal);
  const lexeme = numberLexeme(raw, "predicted_yield");
  if (lexeme === null) throw new ApiRequestError(500, "INTERNAL", "malformed service response");
  const parsed = JSON.parse(raw) as { model_version: string };
  return { predictedYieldText: lexeme, modelVersion: parsed.model_version };
}

export async function predictImpact(
  temperatureC: number,
  humidityPct: number,
  pressureMbar: number,
  signal?: AbortSignal,
): Promise<ImpactResponse> {
  const raw = await postJson(
    "/api/v1/predict/impact",
    { temperature_c: temperatureC, humidity_pct: humidityPct, pressure_mbar: pressureMbar },
    signal,
  );
  const lexeme = numberLexeme(raw, "expected_yield_pct");
  if (lexeme === null) throw new ApiRequestError(500, "INTERNAL", "malformed service response");
  const parsed = JSON.parse(raw) as { impact: "Positive" | "Negative" };
  return { expectedYieldText: lexeme, impact: parsed.impact };
}

export async function classifyLeaf(file: File, signal?: AbortSignal): Promise<LeafResponse> {
  const form = new FormData();
  form.append("image", file);
  let response: Response;
  try {
    response = await fetch(apiUrl("/api/v1/classify/leaf"), {
      method: "POST",
      body: form,
      signal,
    });
  } catch (cause) {
    if (cause instanceof DOMException && cause.name === "AbortError") throw cause;
    throw new NetworkError(cause);
  }
  if (!response.ok) throw await readError(response);
  const raw = await response.text();
  const lexeme = numberLexeme(raw, "confidence_pct");
  const parsed = JSON.parse(raw) as {
    class: string;
    species: string;
    category: string;
    ailment: string;
  };
  return {
    className: parsed.class,
    confidenceText: lexeme ?? "",
    species: parsed.species,
    category: parsed.category,
    ailment: parsed.ailment,
  };
}

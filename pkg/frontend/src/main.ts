/**
 * Page bootstrap and event wiring. All displayed prediction numbers come
 * byte-for-byte from service responses (see api.ts); this module only
 * moves them into the DOM.
 *
 * Each panel allows at most one in-flight request: submitting again
 * aborts and supersedes the previous call.
 */

import {
  ApiRequestError,
  NetworkError,
  classifyLeaf,
  predictImpact,
  predictYield,
} from "./api.js";
import {
  CROP_STATES,
  SEASONS,
  SLIDER_BOUNDS,
  badgeKind,
  defaultWhatIf,
  defaultYieldForm,
  parseArea,
  withImpactResult,
  withWhatIfError,
  withYieldError,
  withYieldResult,
  yieldResultLine,
  type WhatIfState,
  type YieldFormState,
} from "./state.js";

function el<T extends HTMLElement>(doc: Document, id: string): T {
  const found = doc.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

function fillSelect(select: HTMLSelectElement, options: readonly string[], selected: string) {
  select.innerHTML = "";
  for (const value of options) {
    const option = select.ownerDocument.createElement("option");
    option.value = value;
    option.textContent = value;
    option.selected = value === selected;
    select.appendChild(option);
  }
}

class PanelRequest {
  private controller: AbortController | null = null;

  /** Abort whatever is in flight and hand out a fresh signal. */
  begin(): AbortSignal {
    this.controller?.abort();
    this.controller = new AbortController();
    return this.controller.signal;
  }
}

export function initApp(doc: Document): void {
  initYieldPanel(doc);
  initWhatIfPanel(doc);
  initLeafPanel(doc);
}

// -- yield form --------------------------------------------------------------

function initYieldPanel(doc: Document): void {
  let state: YieldFormState = defaultYieldForm();
  const requests = new PanelRequest();

  const area = el<HTMLInputElement>(doc, "area");
  const stateSelect = el<HTMLSelectElement>(doc, "state");
  const seasonSelect = el<HTMLSelectElement>(doc, "season");
  const predictButton = el<HTMLButtonElement>(doc, "predict");
  const clearButton = el<HTMLButtonElement>(doc, "clear");
  const result = el<HTMLDivElement>(doc, "yield-result");
  const fieldError = el<HTMLDivElement>(doc, "yield-error");
  const banner = el<HTMLDivElement>(doc, "yield-banner");
  const hint = el<HTMLDivElement>(doc, "area-hint");

  function render() {
    area.value = state.areaText;
    const submittable = parseArea(state.areaText) !== null;
    predictButton.disabled = !submittable;
    hint.textContent =
      state.areaText.trim() !== "" && !submittable ? "Enter the area as a number (0 or more)" : "";
    hint.hidden = hint.textContent === "";
    result.hidden = state.resultText === undefined;
    result.textContent = state.resultText !== undefined ? yieldResultLine(state.resultText) : "";
    fieldError.hidden = state.error === undefined;
    fieldError.textContent = state.error ?? "";
  }

  area.addEventListener("input", () => {
    state = { ...state, areaText: area.value };
    render();
  });
  stateSelect.addEventListener("change", () => {
    state = { ...state, state: stateSelect.value };
  });
  seasonSelect.addEventListener("change", () => {
    state = { ...state, season: seasonSelect.value };
  });

  clearButton.addEventListener("click", () => {
    state = defaultYieldForm();
    fillSelect(stateSelect, CROP_STATES, state.state);
    fillSelect(seasonSelect, SEASONS, state.season);
    banner.hidden = true;
    render();
  });

  predictButton.addEventListener("click", async () => {
    const areaValue = parseArea(state.areaText);
    if (areaValue === null) return;
    banner.hidden = true;
    try {
      const response = await predictYield(
        areaValue,
        stateSelect.value,
        seasonSelect.value,
        requests.begin(),
      );
      state = withYieldResult(state, response.predictedYieldText);
    } catch (error) {
      if (error instanceof DOMException && error.name === "AbortError") return;
      if (error instanceof NetworkError) {
        banner.textContent = `${error.message} — try again`;
        banner.hidden = false;
        return;
      }
      state = withYieldError(state, (error as ApiRequestError).message);
    }
    render();
  });

  fillSelect(stateSelect, CROP_STATES, state.state);
  fillSelect(seasonSelect, SEASONS, state.season);
  render();
}

// -- what-if sliders -----------------------------------------------------------

function initWhatIfPanel(doc: Document): void {
  let state: WhatIfState = defaultWhatIf();
  const requests = new PanelRequest();

  const sliders = {
    temperature: el<HTMLInputElement>(doc, "temperature"),
    humidity: el<HTMLInputElement>(doc, "humidity"),
    pressure: el<HTMLInputElement>(doc, "pressure"),
  } as const;
  const labels = {
    temperature: el<HTMLSpanElement>(doc, "temperature-value"),
    humidity: el<HTMLSpanElement>(doc, "humidity-value"),
    pressure: el<HTMLSpanElement>(doc, "pressure-value"),
  } as const;
  const submit = el<HTMLButtonElement>(doc, "whatif-submit");
  const history = el<HTMLUListElement>(doc, "whatif-history");
  const error = el<HTMLDivElement>(doc, "whatif-error");

  for (const [name, slider] of Object.entries(sliders) as [keyof typeof sliders, HTMLInputElement][]) {
    const bounds = SLIDER_BOUNDS[name];
    slider.min = String(bounds.min);
    slider.max = String(bounds.max);
    slider.step = String(bounds.step);
    slider.value = String(state[name]);
    labels[name].textContent = slider.value;
    slider.addEventListener("input", () => {
      state = { ...state, [name]: Number(slider.value) };
      labels[name].textContent = slider.value;
    });
  }

  function render() {
    error.hidden = state.error === undefined;
    error.textContent = state.error ?? "";
    history.innerHTML = "";
    for (const entry of state.history) {
      const item = doc.createElement("li");
      const badge = doc.createElement("span");
      badge.className = `badge ${badgeKind(entry.impact)}`;
      badge.textContent = entry.impact;
      const text = doc.createElement("span");
      text.textContent = `Expected yield ${entry.expectedYieldText}% `;
      item.appendChild(text);
      item.appendChild(badge);
      history.appendChild(item);
    }
  }

  submit.addEventListener("click", async () => {
    try {
      const response = await predictImpact(
        state.temperature,
        state.humidity,
        state.pressure,
        requests.begin(),
      );
      state = withImpactResult(state, response);
    } catch (err) {
      if (err instanceof DOMException && err.name === "AbortError") return;
      const message =
        err instanceof NetworkError ? `${err.message} — try again` : (err as ApiRequestError).message;
      state = withWhatIfError(state, message);
    }
    render();
  });

  render();
}

// -- leaf upload ----------------------------------------------------------------

function initLeafPanel(doc: Document): void {
  const requests = new PanelRequest();
  const fileInput = el<HTMLInputElement>(doc, "leaf-file");
  const uploadButton = el<HTMLButtonElement>(doc, "leaf-upload");
  const card = el<HTMLDivElement>(doc, "leaf-card");

  function renderError(message: string) {
    card.hidden = false;
    card.innerHTML = "";
    const error = doc.createElement("div");
    error.className = "card-error";
    error.textContent = message;
    card.appendChild(error);
  }

  uploadButton.addEventListener("click", async () => {
    const file = fileInput.files?.[0];
    if (!file) {
      renderError("Choose an image file first");
      return;
    }
    try {
      const diagnosis = await classifyLeaf(file, requests.begin());
      card.hidden = false;
      card.innerHTML = "";
      const rows: [string, string][] = [
        ["Species", diagnosis.species],
        ["Category", diagnosis.category],
        ["Class", diagnosis.className],
        ["Confidence", `${diagnosis.confidenceText}%`],
      ];
      for (const [label, value] of rows) {
        const row = doc.createElement("div");
        row.className = "card-row";
        const term = doc.createElement("span");
        term.className = "card-label";
        term.textContent = `${label}: `;
        const detail = doc.createElement("span");
        detail.textContent = value;
        row.appendChild(term);
        row.appendChild(detail);
        card.appendChild(row);
      }
      const ailment = doc.createElement("div");
      ailment.className = "card-ailment";
      ailment.textContent = diagnosis.ailment;
      card.appendChild(ailment);
    } catch (error) {
      if (error instanceof DOMException && error.name === "AbortError") return;
      if (error instanceof NetworkError) {
        renderError(`${error.message} — try again`);
      } else {
        const apiError = error as ApiRequestError;
        renderError(
          apiError.code === "PAYLOAD_TOO_LARGE" ? "File too large" : apiError.message,
        );
      }
    }
  });
}

if (typeof window !== "undefined" && typeof window.document !== "undefined") {
  const doc = window.document;
  if (doc.readyState === "loading") {
    doc.addEventListener("DOMContentLoaded", () => initApp(doc));
  } else if (doc.getElementById("area")) {
    initApp(doc);
  }
}

import { afterEach, describe, expect, it, vi } from "vitest";

import {
  ApiRequestError,
  NetworkError,
  classifyLeaf,
  numberLexeme,
  predictImpact,
  predictYield,
} from "../src/api.js";

interface Call {
  url: string;
  init?: RequestInit;
}

function stubFetch(responder: (url: string, init?: RequestInit) => Response | Promise<Response>) {
  const calls: Call[] = [];
  vi.stubGlobal("fetch", async (url: RequestInfo | URL, init?: RequestInit) => {
    calls.push({ url: String(url), init });
    return responder(String(url), init);
  });
  return calls;
}

function jsonResponse(body: string, status = 200): Response {
  return new Response(body, {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("numberLexeme", () => {
  it("extracts the exact bytes of a numeric field", () => {
    const raw = '{"predicted_yield":1.9690000000000003,"model_version":"paper-mlr-v1"}';
    expect(numberLexeme(raw, "predicted_yield")).toBe("1.9690000000000003");
  });

  it.each([
    ['{"v":1.969}', "1.969"],
    ['{"v":42}', "42"],
    ['{"v":-0.5}', "-0.5"],
    ['{"v":1e-05}', "1e-05"],
    ['{"v": 7.25 }', "7.25"],
  ])("handles %s", (raw, expected) => {
    expect(numberLexeme(raw, "v")).toBe(expected);
  });

  it("returns null when the field is absent", () => {
    expect(numberLexeme('{"other":1}', "v")).toBeNull();
  });
});

describe("predictYield", () => {
  it("posts the form fields and keeps the raw number text", async () => {
    const calls = stubFetch(() =>
      jsonResponse('{"predicted_yield":1.969,"model_version":"paper-mlr-v1"}'),
    );
    const result = await predictYield(1, "Andhra Pradesh", "Autumn");
    expect(result.predictedYieldText).toBe("1.969");
    expect(result.modelVersion).toBe("paper-mlr-v1");
    expect(calls).toHaveLength(1);
    expect(calls[0].url).toBe("/api/v1/predict/yield");
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({
      area: 1,
      state: "Andhra Pradesh",
      season: "Autumn",
    });
  });

  it("preserves long float representations byte-for-byte", async () => {
    stubFetch(() =>
      jsonResponse('{"predicted_yield":3.2830000000000004,"model_version":"paper-mlr-v1"}'),
    );
    const result = await predictYield(2, "Tamil Nadu", "Summer");
    expect(result.predictedYieldText).toBe("3.2830000000000004");
  });

  it("raises ApiRequestError with the service's code and message", async () => {
    stubFetch(() =>
      jsonResponse('{"code":"VALIDATION","message":"invalid field \'area\'"}', 422),
    );
    await expect(predictYield(-1, "Kerala", "Rabi")).rejects.toMatchObject({
      status: 422,
      code: "VALIDATION",
      message: "invalid field 'area'",
    });
  });

  it("wraps transport failures as retryable NetworkError", async () => {
    vi.stubGlobal("fetch", async () => {
      throw new TypeError("fetch failed");
    });
    await expect(predictYield(1, "Kerala", "Rabi")).rejects.toBeInstanceOf(NetworkError);
  });
});

describe("predictImpact", () => {
  it("returns the verbatim impact and raw yield text", async () => {
    const calls = stubFetch(() =>
      jsonResponse('{"expected_yield_pct":43.25,"impact":"Negative"}'),
    );
    const result = await predictImpact(14, 38, 138.24);
    expect(result).toEqual({ expectedYieldText: "43.25", impact: "Negative" });
    expect(JSON.parse(String(calls[0].init?.body))).toEqual({
      temperature_c: 14,
      humidity_pct: 38,
      pressure_mbar: 138.24,
    });
  });
});

describe("classifyLeaf", () => {
  it("posts multipart form data under the field name `image`", async () => {
    const calls = stubFetch(() =>
      jsonResponse(
        '{"class":"Healthy","confidence_pct":97.5,"species":"Oryza sativa",' +
          '"category":"Non-leguminous plant","ailment":"No ailment detected in given sample"}',
      ),
    );
    const file = new File([new Uint8Array([1, 2, 3])], "leaf.png", { type: "image/png" });
    const result = await classifyLeaf(file);
    expect(result.className).toBe("Healthy");
    expect(result.confidenceText).toBe("97.5");
    expect(result.ailment).toBe("No ailment detected in given sample");
    const body = calls[0].init?.body as FormData;
    expect(body).toBeInstanceOf(FormData);
    expect(body.get("image")).toBe(file);
  });

  it("maps 413 to an ApiRequestError with PAYLOAD_TOO_LARGE", async () => {
    stubFetch(() =>
      jsonResponse('{"code":"PAYLOAD_TOO_LARGE","message":"upload exceeds 5242880 bytes"}', 413),
    );
    const file = new File([new Uint8Array(10)], "big.png", { type: "image/png" });
    const error = await classifyLeaf(file).catch((e) => e);
    expect(error).toBeInstanceOf(ApiRequestError);
    expect(error.code).toBe("PAYLOAD_TOO_LARGE");
  });
});

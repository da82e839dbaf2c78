import { describe, expect, it } from "vitest";

import { ERROR_MESSAGES, messageFor } from "../src/errors.js";
import recorded from "./fixtures/error_codes.json";

describe("error-code message map", () => {
  it("covers every recorded API error code", () => {
    for (const code of recorded.codes) {
      expect(ERROR_MESSAGES[code], `missing message for ${code}`).toBeTruthy();
      expect(ERROR_MESSAGES[code]).not.toBe(code);
    }
  });

  it("has no stale entries beyond the recorded enum", () => {
    for (const code of Object.keys(ERROR_MESSAGES)) {
      expect(recorded.codes, `stale mapping ${code}`).toContain(code);
    }
  });

  it("falls back gracefully for unknown codes", () => {
    expect(messageFor("BrandNewCode")).toContain("BrandNewCode");
    expect(messageFor("BrandNewCode", "server text")).toBe("server text");
  });
});

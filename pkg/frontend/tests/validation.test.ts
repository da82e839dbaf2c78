import { describe, expect, it } from "vitest";

import { headerCells, preCheckUpload } from "../src/validation.js";

describe("upload pre-checks", () => {
  it("rejects non-csv extensions before anything else", () => {
    const problems = preCheckUpload("data.txt", "a,label\n1,x\n");
    expect(problems).toHaveLength(1);
    expect(problems[0].code).toBe("NotCsv");
  });

  it("rejects an empty file", () => {
    expect(preCheckUpload("data.csv", "  \n")[0].code).toBe("EmptyFile");
  });

  it("flags a numeric-looking first row as a missing header", () => {
    const codes = preCheckUpload("data.csv", "1.5,2.5,0\n3.5,4.5,1\n").map((p) => p.code);
    expect(codes).toContain("MissingHeader");
  });

  it("flags empty header names", () => {
    const codes = preCheckUpload("data.csv", "a,,label\n1,2,x\n").map((p) => p.code);
    expect(codes).toContain("MissingHeader");
  });

  it("requires a label column", () => {
    const codes = preCheckUpload("data.csv", "a,b,target\n1,2,x\n").map((p) => p.code);
    expect(codes).toEqual(["MissingLabelColumn"]);
  });

  it("accepts a well-formed file", () => {
    expect(preCheckUpload("data.csv", "a,b,label\n1,2,x\n")).toEqual([]);
  });

  it("parses quoted header cells", () => {
    expect(headerCells('"crop, type",yield,label\n1,2,x')).toEqual([
      "crop, type",
      "yield",
      "label",
    ]);
  });
});

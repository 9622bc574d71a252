import { describe, expect, it } from "vitest";

import { parseCsv, parsePlotData } from "../src/csv.js";

describe("parseCsv", () => {
  it("reads header and rows", () => {
    const rows = parseCsv("a,b\n1,2\n3,4\n");
    expect(rows).toEqual([
      { a: "1", b: "2" },
      { a: "3", b: "4" },
    ]);
  });

  it("handles quoted fields with commas", () => {
    const rows = parseCsv('name,combo\nx,"key=a;IT=1,2"\n');
    expect(rows[0]).toEqual({ name: "x", combo: "key=a;IT=1,2" });
  });

  it("empty input gives no rows", () => {
    expect(parseCsv("")).toEqual([]);
  });
});

describe("parsePlotData", () => {
  it("maps the evaluation columns to typed points", () => {
    const text =
      "instance,algorithm,combo,delta_completion_sum,delta_tardiness\n" +
      "g1_01,iira,indicator=MRUR,12,3\n" +
      "g1_01,ssira,key=earliest_start,5,4\n";
    expect(parsePlotData(text)).toEqual([
      {
        instance: "g1_01",
        algorithm: "iira",
        combo: "indicator=MRUR",
        deltaCompletionSum: 12,
        deltaTardiness: 3,
      },
      {
        instance: "g1_01",
        algorithm: "ssira",
        combo: "key=earliest_start",
        deltaCompletionSum: 5,
        deltaTardiness: 4,
      },
    ]);
  });
});

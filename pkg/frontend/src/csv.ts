// Minimal CSV reader for the evaluation outputs (plotdata.csv). The files
// are machine-written without quoting, so splitting on commas is enough;
// quoted fields are still handled for safety.

export function parseCsv(text: string): Record<string, string>[] {
  const lines = text.split(/\r?\n/).filter((line) => line.length > 0);
  if (lines.length === 0) return [];
  const header = splitLine(lines[0]!);
  return lines.slice(1).map((line) => {
    const values = splitLine(line);
    const row: Record<string, string> = {};
    header.forEach((name, index) => {
      row[name] = values[index] ?? "";
    });
    return row;
  });
}

function splitLine(line: string): string[] {
  const fields: string[] = [];
  let current = "";
  let quoted = false;
  for (let i = 0; i < line.length; i += 1) {
    const ch = line[i];
    if (quoted) {
      if (ch === '"' && line[i + 1] === '"') {
        current += '"';
        i += 1;
      } else if (ch === '"') {
        quoted = false;
      } else {
        current += ch;
      }
    } else if (ch === '"') {
      quoted = true;
    } else if (ch === ",") {
      fields.push(current);
      current = "";
    } else {
      current += ch;
    }
  }
  fields.push(current);
  return fields;
}

export interface PlotPoint {
  instance: string;
  algorithm: string;
  combo: string;
  deltaCompletionSum: number;
  deltaTardiness: number;
}

export function parsePlotData(text: string): PlotPoint[] {
  return parseCsv(text).map((row) => ({
    instance: row["instance"] ?? "",
    algorithm: row["algorithm"] ?? "",
    combo: row["combo"] ?? "",
    deltaCompletionSum: Number(row["delta_completion_sum"] ?? 0),
    deltaTardiness: Number(row["delta_tardiness"] ?? 0),
  }));
}

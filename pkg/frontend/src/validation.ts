/**
 * Client-side upload pre-checks, run before any network call:
 * file extension, header-row presence, and the required 'label' column.
 * The server re-validates everything; these only save a round trip.
 */

export interface UploadProblem {
  code: string;
  message: string;
}

/** Blob.text() is not universal; FileReader is. */
export function readFileText(file: Blob): Promise<string> {
  return new Promise((resolve, reject) => {
    const reader = new FileReader();
    reader.onerror = () => reject(reader.error);
    reader.onload = () => resolve(String(reader.result ?? ""));
    reader.readAsText(file);
  });
}

/** First CSV record (handles quoted cells; enough for a header line). */
export function headerCells(text: string): string[] {
  const cells: string[] = [];
  let cell = "";
  let quoted = false;
  for (let i = 0; i < text.length; i++) {
    const ch = text[i];
    if (quoted) {
      if (ch === '"' && text[i + 1] === '"') {
        cell += '"';
        i++;
      } else if (ch === '"') {
        quoted = false;
      } else {
        cell += ch;
      }
    } else if (ch === '"') {
      quoted = true;
    } else if (ch === ",") {
      cells.push(cell);
      cell = "";
    } else if (ch === "\n" || ch === "\r") {
      break;
    } else {
      cell += ch;
    }
  }
  cells.push(cell);
  return cells;
}

function looksNumeric(cell: string): boolean {
  const v = cell.trim();
  return v !== "" && Number.isFinite(Number(v));
}

export function preCheckUpload(fileName: string, text: string): UploadProblem[] {
  const problems: UploadProblem[] = [];
  if (!fileName.toLowerCase().endsWith(".csv")) {
    problems.push({ code: "NotCsv", message: "Choose a .csv file." });
    return problems;
  }
  if (text.trim() === "") {
    problems.push({ code: "EmptyFile", message: "The file is empty." });
    return problems;
  }
  const header = headerCells(text);
  const headerLooksLikeData =
    header.some((c) => c.trim() === "") || header.some(looksNumeric);
  if (headerLooksLikeData) {
    problems.push({
      code: "MissingHeader",
      message: "The first row must contain column names.",
    });
  }
  if (!header.includes("label")) {
    problems.push({
      code: "MissingLabelColumn",
      message: "Include a column named 'label' for the target values.",
    });
  }
  return problems;
}

// Client-side form rules: a strict subset of what the server enforces,
// so nothing the form accepts can fail server validation (races aside).

import { BidRow, ScreenRequest, TenderForm } from "./types";

export interface BidIssue {
  index: number;
  message: string;
}

export function parseAmount(text: string): number | null {
  const trimmed = text.trim();
  if (!trimmed) return null;
  const value = Number(trimmed.replace(/[']/g, ""));
  return Number.isFinite(value) ? value : null;
}

export function validBids(rows: BidRow[]): { firm_id: string; amount: number }[] {
  const out: { firm_id: string; amount: number }[] = [];
  rows.forEach((row, i) => {
    const amount = parseAmount(row.amount);
    if (amount !== null && amount > 0) {
      out.push({ firm_id: row.firm.trim() || `firm${i + 1}`, amount });
    }
  });
  return out;
}

export function bidIssues(rows: BidRow[]): BidIssue[] {
  const issues: BidIssue[] = [];
  rows.forEach((row, index) => {
    if (!row.amount.trim()) return; // empty rows are simply ignored
    const amount = parseAmount(row.amount);
    if (amount === null) {
      issues.push({ index, message: "not a number" });
    } else if (amount <= 0) {
      issues.push({ index, message: "must be positive" });
    }
  });
  return issues;
}

// Distinct firms matter: the server keeps one bid per firm.
export function distinctFirmCount(rows: BidRow[]): number {
  const firms = new Set<string>();
  validBids(rows).forEach((b) => firms.add(b.firm_id));
  return firms.size;
}

export function canSubmit(form: TenderForm): boolean {
  return bidIssues(form.bids).length === 0 && distinctFirmCount(form.bids) >= 3;
}

export function submitHint(form: TenderForm): string | null {
  if (bidIssues(form.bids).length > 0) return "fix the highlighted bids";
  if (distinctFirmCount(form.bids) < 3) return "at least three bids required";
  return null;
}

export function buildScreenRequest(form: TenderForm): ScreenRequest {
  const req: ScreenRequest = { bids: validBids(form.bids) };
  if (form.tenderId.trim()) req.tender_id = form.tenderId.trim();
  if (form.region.trim()) req.region = form.region.trim();
  if (form.procedure) req.procedure = form.procedure;
  if (form.date.trim()) req.date = form.date.trim();
  return req;
}

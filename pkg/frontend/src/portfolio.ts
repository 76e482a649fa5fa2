// Portfolio list: the manager's screened tenders with lights and filters.
// Filtering happens on data the API returned; nothing is re-scored.

import { LightName, TenderRecord } from "./types";

export interface PortfolioFilter {
  light?: LightName | "";
  region?: string;
  dateFrom?: string; // ISO prefix compare is enough for YYYY[-MM[-DD]]
  dateTo?: string;
}

export function applyFilter(records: TenderRecord[], filter: PortfolioFilter): TenderRecord[] {
  return records.filter((r) => {
    if (filter.light && r.light !== filter.light) return false;
    if (filter.region && (r.region ?? "") !== filter.region) return false;
    if (filter.dateFrom && (r.date ?? "") < filter.dateFrom) return false;
    if (filter.dateTo && (r.date ?? "") > filter.dateTo + "~") return false;
    return true;
  });
}

export function sortNewestFirst(records: TenderRecord[]): TenderRecord[] {
  return [...records].sort((a, b) => {
    const da = a.date ?? "";
    const db = b.date ?? "";
    if (da !== db) return da < db ? 1 : -1;
    return a.tender_id < b.tender_id ? -1 : 1;
  });
}

export function regionOptions(records: TenderRecord[]): string[] {
  const regions = new Set<string>();
  records.forEach((r) => {
    if (r.region) regions.add(r.region);
  });
  return [...regions].sort();
}

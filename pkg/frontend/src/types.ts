// Payload types of the screening API. The UI never computes screens or
// verdicts itself; everything displayed comes from these responses.

export type LightName = "green" | "suspicious" | "very_suspicious";

export interface BidRow {
  firm: string;
  amount: string; // raw input text; validation parses it
}

export interface TenderForm {
  tenderId: string;
  region: string;
  procedure: "" | "open" | "invitation";
  date: string;
  bids: BidRow[];
}

export interface ScreenRequest {
  tender_id?: string;
  region?: string;
  procedure?: string;
  date?: string;
  bids: { firm_id: string; amount: number }[];
  model_id?: string;
}

export interface TreeStep {
  feature?: string;
  threshold?: number;
  value?: number;
  test?: string;
  taken?: "yes" | "no";
  leaf_class?: 0 | 1;
  leaf_probability?: number;
  samples?: number;
}

export interface ScreenResponse {
  tender_id: string | null;
  screens: Record<string, number | null> & { n_bids: number };
  probability: number;
  light: LightName;
  model_id: string;
  thresholds: { suspicious: number; very_suspicious: number };
  tree_path: { steps: TreeStep[]; display: string[] } | null;
}

export interface Flag {
  flag_id: string;
  tender_id: string;
  manager_id: string;
  note: string;
  status: "open" | "reviewed";
  created_at: string;
}

export interface TenderRecord {
  tender_id: string;
  region: string | null;
  procedure: string | null;
  date: string | null;
  probability: number;
  light: LightName;
  model_id: string;
}

export interface ApiError {
  error: string;
  detail?: unknown;
}

// DOM shell wiring the form, verdict panel, portfolio and escalation
// against the screening API. All logic that merits tests lives in the
// pure modules; this file only moves data to and from the page.

import { ApiClient } from "./api";
import { applyFilter, regionOptions, sortNewestFirst } from "./portfolio";
import { LightName, ScreenResponse, TenderForm } from "./types";
import { buildScreenRequest, canSubmit, submitHint } from "./validation";
import { buildVerdictView } from "./verdict";

const api = new ApiClient("..");

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function readForm(): TenderForm {
  const bids = [...document.querySelectorAll<HTMLElement>("#bid-rows .bid-row")].map((row) => ({
    firm: (row.querySelector<HTMLInputElement>(".bid-firm")?.value ?? ""),
    amount: (row.querySelector<HTMLInputElement>(".bid-amount")?.value ?? ""),
  }));
  return {
    tenderId: el<HTMLInputElement>("tender-id").value,
    region: el<HTMLInputElement>("tender-region").value,
    procedure: el<HTMLSelectElement>("tender-procedure").value as TenderForm["procedure"],
    date: el<HTMLInputElement>("tender-date").value,
    bids,
  };
}

function addBidRow(firm = "", amount = ""): void {
  const row = document.createElement("div");
  row.className = "bid-row";
  row.innerHTML = `
    <input class="bid-firm" placeholder="firm" value="${firm}">
    <input class="bid-amount" placeholder="bid amount" value="${amount}">
    <button type="button" class="bid-remove" title="remove">x</button>`;
  row.querySelector(".bid-remove")!.addEventListener("click", () => {
    row.remove();
    refreshSubmitState();
  });
  row.querySelectorAll("input").forEach((input) =>
    input.addEventListener("input", refreshSubmitState),
  );
  el("bid-rows").appendChild(row);
}

function refreshSubmitState(): void {
  const form = readForm();
  const button = el<HTMLButtonElement>("screen-button");
  button.disabled = !canSubmit(form);
  el("form-hint").textContent = submitHint(form) ?? "";
}

let lastResponse: ScreenResponse | null = null;

function renderVerdict(response: ScreenResponse): void {
  lastResponse = response;
  const view = buildVerdictView(response);
  const badge = el("verdict-badge");
  badge.textContent = view.badge.label;
  badge.className = `badge badge-${view.badge.color}`;
  el("verdict-probability").textContent =
    `cartel probability ${view.probabilityText} (model ${view.modelId})`;
  el("screen-table").innerHTML = view.screenTable
    .map((r) => `<tr><td>${r.name}</td><td>${r.value}</td></tr>`)
    .join("");
  const panel = el("tree-path");
  if (view.treePath) {
    panel.innerHTML = view.treePath.map((line) => `<div>${line}</div>`).join("");
    el("tree-path-wrap").style.display = "";
  } else {
    el("tree-path-wrap").style.display = "none";
  }
  el<HTMLButtonElement>("escalate-button").disabled = !view.canEscalate;
  el("verdict-panel").style.display = "";
}

function showError(message: string): void {
  el("form-hint").textContent = message;
}

async function screenTender(): Promise<void> {
  const form = readForm();
  const result = await api.screen(buildScreenRequest(form));
  if (result.ok) {
    renderVerdict(result.value);
    void refreshPortfolio();
  } else if (result.status === 0) {
    showError("network failure, try again");
  } else {
    showError(`${result.error.error}: ${JSON.stringify(result.error.detail ?? "")}`);
  }
}

async function escalate(): Promise<void> {
  if (!lastResponse?.tender_id) return;
  const managerId = el<HTMLInputElement>("manager-id").value.trim() || "manager";
  const note = el<HTMLInputElement>("escalate-note").value;
  const result = await api.createFlag(lastResponse.tender_id, managerId, note);
  const status = el("escalate-status");
  if (result.ok) {
    status.textContent = `flag open (id ${result.value.flag_id})`;
  } else if (result.status === 409) {
    status.textContent = "already escalated: an open flag exists for this tender";
  } else {
    status.textContent = `escalation failed: ${result.error.error}`;
  }
}

async function refreshPortfolio(): Promise<void> {
  const result = await api.listTenders();
  const banner = el("portfolio-error");
  if (!result.ok) {
    banner.textContent = result.status === 0 ? "network failure" : result.error.error;
    return;
  }
  banner.textContent = "";
  const filter = {
    light: el<HTMLSelectElement>("filter-light").value as LightName | "",
    region: el<HTMLSelectElement>("filter-region").value,
  };
  const regions = regionOptions(result.value.tenders);
  const regionSelect = el<HTMLSelectElement>("filter-region");
  const current = regionSelect.value;
  regionSelect.innerHTML =
    `<option value="">all regions</option>` +
    regions.map((r) => `<option${r === current ? " selected" : ""}>${r}</option>`).join("");
  const rows = sortNewestFirst(applyFilter(result.value.tenders, filter));
  const body = el("portfolio-rows");
  if (rows.length === 0) {
    body.innerHTML = `<tr><td colspan="5" class="empty">no screened tenders yet - enter one above</td></tr>`;
    return;
  }
  body.innerHTML = rows
    .map(
      (r) => `<tr data-tender="${r.tender_id}">
        <td>${r.tender_id}</td><td>${r.region ?? ""}</td><td>${r.date ?? ""}</td>
        <td><span class="dot dot-${r.light}"></span>${r.light}</td>
        <td>${(r.probability * 100).toFixed(1)}%</td></tr>`,
    )
    .join("");
}

function bindOnce(): void {
  el("add-bid").addEventListener("click", () => {
    addBidRow();
    refreshSubmitState();
  });
  el("screen-button").addEventListener("click", () => void screenTender());
  el("escalate-button").addEventListener("click", () => void escalate());
  el("filter-light").addEventListener("change", () => void refreshPortfolio());
  el("filter-region").addEventListener("change", () => void refreshPortfolio());
  el("token-save").addEventListener("click", () => {
    api.setToken(el<HTMLInputElement>("token-input").value.trim());
    void refreshPortfolio();
  });
  for (let i = 0; i < 3; i++) addBidRow();
  refreshSubmitState();
  void refreshPortfolio();
}

document.addEventListener("DOMContentLoaded", bindOnce);

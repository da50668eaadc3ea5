// Ledger browser rows: a compact projection of chain records for the table
// view, with the digest columns shortened for scanning.

import type { LedgerRecord } from "./types.js";

export interface LedgerRow {
  seq: number;
  time: number;
  kind: string;
  actors: string;
  tags: string;
  hashPrefix: string;
}

export function ledgerRows(records: LedgerRecord[]): LedgerRow[] {
  return records.map((record) => ({
    seq: record.seq,
    time: record.logical_time,
    kind: `${record.component} ${record.local_id}`,
    actors: record.actor_ids.join(", "),
    tags: record.component_ids.join(", "),
    hashPrefix: record.hash.slice(0, 12),
  }));
}

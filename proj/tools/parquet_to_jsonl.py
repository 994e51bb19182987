#!/usr/bin/env python3
"""Convert a columnar evaluation set to the JSONL layout factjudge reads.

    python3 tools/parquet_to_jsonl.py databricks_doc_eval_set.parquet eval_set.jsonl
"""
import json
import sys

import pandas as pd

COLUMNS = ("request_id", "request", "expected_retrieved_context", "expected_response", "response", "human_label")


def plain(value):
    # Nested parquet values come back as numpy arrays and scalars.
    if hasattr(value, "tolist"):
        value = value.tolist()
    if isinstance(value, dict):
        return {k: plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(v) for v in value]
    return value


def missing(value):
    return value is None or (isinstance(value, float) and value != value)


def main(src, dst):
    frame = pd.read_parquet(src)
    with open(dst, "w", encoding="utf-8") as out:
        for row in frame.to_dict(orient="records"):
            record = {k: plain(row[k]) for k in COLUMNS if k in row and not missing(row[k])}
            out.write(json.dumps(record, ensure_ascii=False) + "\n")
    print(f"{len(frame)} records -> {dst}")


if __name__ == "__main__":
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    main(sys.argv[1], sys.argv[2])

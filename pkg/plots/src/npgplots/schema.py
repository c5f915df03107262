"""Reading the benchmark harness metrics CSVs.

The CSV schema is the contract between the trainer and this package; rows
are consumed as data only, nothing here imports the trainer.
"""

import csv

# exact schema the harness writes; extra columns in a file are ignored
CSV_COLUMNS = (
    "run_id",
    "env",
    "transform",
    "seed",
    "zeta",
    "iteration",
    "avg_return",
    "episodes_used",
    "env_steps_used",
    "wall_clock_s",
    "theta_norm",
    "w_hat_norm",
)


class SchemaError(ValueError):
    """A metrics CSV does not conform to the harness schema."""


def read_rows(path) -> list[dict]:
    """Read one metrics CSV into typed dicts, validating the schema."""
    out = []
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        missing = [c for c in CSV_COLUMNS if c not in (reader.fieldnames or [])]
        if missing:
            raise SchemaError(f"{path}: missing columns {missing}")
        for row in reader:
            try:
                out.append(
                    {
                        "env": row["env"],
                        "transform": row["transform"],
                        "seed": int(row["seed"]),
                        "zeta": float(row["zeta"]),
                        "iteration": int(row["iteration"]),
                        "avg_return": float(row["avg_return"]),
                        "wall_clock_s": float(row["wall_clock_s"]),
                    }
                )
            except ValueError as exc:
                raise SchemaError(f"{path}: bad row {row!r}: {exc}") from None
    return out

"""
Deterministic CSV and JSON serialization of result tables

Every output starts with the resolved run configuration, so a table can be
traced back to (and regenerated from) the inputs that produced it. Floats
are written with 17 significant digits and no locale dependence.
"""
import json
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO

import numpy as np
import pandas as pd

import gsws
from gsws.core.logging import get_logger

logger = get_logger(__name__)

FLOAT_FORMAT = "%.17g"


def split_complex(table: pd.DataFrame) -> pd.DataFrame:
    """Replace every complex column ``c`` by ``c_re`` and ``c_im``"""
    columns = {}
    for name in table.columns:
        series = table[name]
        if np.iscomplexobj(series.to_numpy()):
            values = series.to_numpy(dtype=complex)
            columns[f"{name}_re"] = values.real
            columns[f"{name}_im"] = values.imag
        else:
            columns[name] = series
    return pd.DataFrame(columns, index=table.index)


def header_lines(config: Dict[str, Any]) -> List[str]:
    return [
        f"# gsws {gsws.__version__}",
        "# config: " + json.dumps(config, sort_keys=True, default=str),
    ]


def to_csv(table: pd.DataFrame, config: Dict[str, Any], name: Optional[str] = None) -> str:
    lines = header_lines(config)
    if name is not None:
        lines.append(f"# table: {name}")
    body = split_complex(table).to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return "\n".join(lines) + "\n" + body


def _json_value(value: Any) -> Any:
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return None if math.isnan(value) else float(value)
    return value


def to_json(tables: Dict[str, pd.DataFrame], config: Dict[str, Any]) -> str:
    payload = {
        "config": config,
        "tables": {
            name: [
                {key: _json_value(value) for key, value in row.items()}
                for row in split_complex(table).to_dict(orient="records")
            ]
            for name, table in tables.items()
        },
    }
    return json.dumps(payload, indent=2, sort_keys=False, default=str) + "\n"


def write_tables(
    tables: Dict[str, pd.DataFrame],
    config: Dict[str, Any],
    output_format: str,
    output_path: Optional[Path] = None,
    stream: Optional[TextIO] = None,
) -> List[Path]:
    """
    Write result tables to a file (or files) or to a stream.

    JSON puts all tables in one document. CSV writes one file per table:
    a single table goes to ``output_path`` itself, several tables to
    ``<stem>_<name><suffix>`` next to it; on a stream the tables follow
    each other, each introduced by a ``# table:`` comment.

    Returns:
        Paths written (empty when writing to a stream)
    """
    if output_format == "json":
        text = to_json(tables, config)
        if output_path is None:
            stream.write(text)
            return []
        output_path.parent.mkdir(parents=True, exist_ok=True)
        output_path.write_text(text, encoding="utf-8")
        return [output_path]

    if output_path is None:
        several = len(tables) > 1
        stream.write("".join(to_csv(t, config, name if several else None) for name, t in tables.items()))
        return []

    written = []
    output_path.parent.mkdir(parents=True, exist_ok=True)
    for name, table in tables.items():
        if len(tables) == 1:
            path = output_path
        else:
            path = output_path.with_name(f"{output_path.stem}_{name}{output_path.suffix or '.csv'}")
        path.write_text(to_csv(table, config), encoding="utf-8")
        written.append(path)
    logger.info(f"Wrote {len(written)} table(s) next to {output_path}")
    return written

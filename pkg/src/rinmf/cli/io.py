"""File formats.

* datasets: headerless numeric CSV, one entity per row;
* rules: JSON lines ``{"id", "support", "label"?, "quality"?, "description"?}``
  with 0-based entity (row) indices;
* groupings: JSON ``{"k", "assignment": {rule_id: factor}, "clusters": [[...]]}``;
* matrices and tables written by the tools: CSV with a header row and floats
  printed with 17 significant digits.
"""
import csv
import hashlib
import json
import math

import numpy as np

from ..errors import DataError, DomainError
from ..grouping import RuleGrouping
from ..rules import Rule, RuleSet


def load_dataset(path):
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        for r, line in enumerate(csv.reader(fh)):
            if not line or all(not cell.strip() for cell in line):
                continue
            values = []
            for col, cell in enumerate(line):
                try:
                    v = float(cell)
                except ValueError:
                    raise DataError(f"{path}: non-numeric cell {cell!r} at (row {r}, col {col})") from None
                if not math.isfinite(v):
                    raise DataError(f"{path}: non-finite value at (row {r}, col {col})")
                if v < 0:
                    raise DataError(f"{path}: negative value {v} at (row {r}, col {col})")
                values.append(v)
            if rows and len(values) != len(rows[0]):
                raise DataError(
                    f"{path}: row {r} has {len(values)} columns, expected {len(rows[0])}"
                )
            rows.append(values)
    if not rows:
        raise DataError(f"{path}: empty dataset")
    return np.array(rows, dtype=float)


def load_rules(path, m):
    rules = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                rec = json.loads(line)
                rid = str(rec["id"])
                support = [int(i) for i in rec["support"]]
            except (ValueError, KeyError, TypeError) as exc:
                raise DataError(f"{path}:{lineno}: malformed rule record ({exc})") from None
            bad = [i for i in support if not 0 <= i < m]
            if bad:
                raise DataError(f"{path}:{lineno}: rule {rid!r} support index {bad[0]} outside [0, {m})")
            quality = rec.get("quality")
            try:
                rules.append(
                    Rule(
                        rid,
                        frozenset(support),
                        label=None if rec.get("label") is None else str(rec["label"]),
                        description=str(rec.get("description", "")),
                        quality=None if quality is None else float(quality),
                    )
                )
            except DomainError as exc:
                raise DataError(f"{path}:{lineno}: {exc}") from None
    try:
        return RuleSet(m, rules)
    except DomainError as exc:
        raise DataError(f"{path}: {exc}") from None


def save_rules(path, rs):
    with open(path, "w", encoding="utf-8") as fh:
        for r in rs.rules:
            rec = {"id": r.id, "support": sorted(r.support)}
            if r.label is not None:
                rec["label"] = r.label
            if r.quality is not None:
                rec["quality"] = r.quality
            if r.description:
                rec["description"] = r.description
            fh.write(json.dumps(rec) + "\n")


def save_grouping(path, g, rs=None):
    doc = {"k": g.k, "clusters": [sorted(c) for c in g.clusters]}
    if rs is not None and g.assignment:
        doc["assignment"] = {r.id: a for r, a in zip(rs.rules, g.assignment)}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1)
        fh.write("\n")


def load_grouping(path, rs=None):
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except ValueError as exc:
            raise DataError(f"{path}: invalid JSON ({exc})") from None
    k = int(doc["k"])
    if rs is not None and "assignment" in doc:
        ids = {r.id: j for j, r in enumerate(rs.rules)}
        missing = [rid for rid in ids if rid not in doc["assignment"]]
        if missing:
            raise DataError(f"{path}: rule {missing[0]!r} has no factor")
        assignment = [int(doc["assignment"][r.id]) for r in rs.rules]
        try:
            return RuleGrouping.from_assignment(rs, assignment, k)
        except DomainError as exc:
            raise DataError(f"{path}: {exc}") from None
    if "clusters" not in doc:
        raise DataError(f"{path}: grouping needs clusters or a rule assignment")
    clusters = tuple(frozenset(int(i) for i in c) for c in doc["clusters"])
    if len(clusters) != k:
        raise DataError(f"{path}: {len(clusters)} clusters for k={k}")
    return RuleGrouping(k, (), clusters)


def fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def write_table(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def write_matrix(path, M, prefix="c"):
    M = np.asarray(M, dtype=float)
    write_table(path, [f"{prefix}{j}" for j in range(M.shape[1])], M.tolist())


def load_matrix(path):
    """Read a matrix written by :func:`write_matrix` (header row skipped)."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2:
        raise DataError(f"{path}: no matrix rows")
    try:
        return np.array([[float(v) for v in row] for row in rows[1:] if row], dtype=float)
    except ValueError as exc:
        raise DataError(f"{path}: {exc}") from None


def sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()

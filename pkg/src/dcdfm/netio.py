"""Network ingestion and serialization.

Covers a pragmatic GML subset (``graph [ node [ id ... value ... ] edge [
source ... target ... ] ]`` with arbitrary ignored extras), plain label
files, dense matrix CSV with exact round-tripping, experiment-result CSVs,
the additive Gaussian noise transform for perturbation studies, and a
key=value manifest mapping dataset names to local files.

Readers reject malformed input rather than repairing it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._rng import make_rng
from .errors import DanglingEdge, NonContiguousLabels, ParseError
from .model import Labeling, WeightedAdjacency


@dataclass(frozen=True, eq=False)
class NetworkDataset:
    """A named network with optional ground-truth labels.

    ``node_ids`` preserves the original file identifiers in file order; row
    i of the adjacency corresponds to ``node_ids[i]``.  ``raw_label_values``
    keeps the file's label attributes before renumbering (used by manifest
    merge maps).
    """

    name: str
    adjacency: WeightedAdjacency
    truth: Labeling | None
    node_ids: tuple
    raw_label_values: tuple | None = None

    @property
    def n(self) -> int:
        return self.adjacency.n


# ---------------------------------------------------------------------------
# GML subset
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<comment>\#[^\n]*)
      | (?P<lbracket>\[)
      | (?P<rbracket>\])
      | (?P<string>"[^"]*")
      | (?P<number>[+-]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
      | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)


def _tokenize(text: str):
    tokens = []
    line = 1
    line_start = 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(
                f"unexpected character {text[pos]!r}", line=line, column=pos - line_start + 1
            )
        kind = m.lastgroup
        value = m.group()
        if kind not in ("ws", "comment"):
            tokens.append((kind, value, line, pos - line_start + 1))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = pos + value.rindex("\n") + 1
        pos = m.end()
    return tokens


def _parse_value(kind, value):
    if kind == "string":
        return value[1:-1]
    if kind == "ident":
        return value
    if re.search(r"[.eE]", value):
        return float(value)
    return int(value)


def _parse_pairs(tokens, i, closing):
    """Parse ``key value`` pairs until the matching ']' (or EOF at top level)."""
    pairs = []
    while True:
        if i >= len(tokens):
            if closing:
                raise ParseError("unexpected end of input inside a bracketed block")
            return pairs, i
        kind, value, line, col = tokens[i]
        if kind == "rbracket":
            if not closing:
                raise ParseError("unmatched ']'", line=line, column=col)
            return pairs, i + 1
        if kind != "ident":
            raise ParseError(f"expected a key, found {value!r}", line=line, column=col)
        key = value
        i += 1
        if i >= len(tokens):
            raise ParseError(f"key {key!r} has no value", line=line, column=col)
        vkind, vvalue, vline, vcol = tokens[i]
        if vkind == "lbracket":
            sub, i = _parse_pairs(tokens, i + 1, closing=True)
            pairs.append((key, sub, line, col))
        elif vkind in ("number", "string", "ident"):
            pairs.append((key, _parse_value(vkind, vvalue), line, col))
            i += 1
        else:
            raise ParseError(f"invalid value for key {key!r}", line=vline, column=vcol)


def _as_text(data) -> str:
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def parse_gml(data, name: str = "network") -> NetworkDataset:
    """Parse a GML subset into an undirected simple 0/1 network.

    Duplicate and reciprocal edges collapse to one undirected edge and
    self-loops are dropped.  When every node carries a ``value`` attribute,
    it becomes the ground truth: distinct raw values are mapped to 1..K in
    sorted order (numeric when all are numeric).
    """
    tokens = _tokenize(_as_text(data))
    pairs, _ = _parse_pairs(tokens, 0, closing=False)
    graph = next((v for k, v, *_ in pairs if k == "graph" and isinstance(v, list)), None)
    if graph is None:
        raise ParseError("no 'graph [ ... ]' block found")

    node_ids: list = []
    values: dict = {}
    index: dict = {}
    edges: list = []
    for key, val, line, col in graph:
        if key == "node" and isinstance(val, list):
            attrs = {k: v for k, v, *_ in val if not isinstance(v, list)}
            if "id" not in attrs:
                raise ParseError("node block without id", line=line, column=col)
            nid = attrs["id"]
            if nid in index:
                raise ParseError(f"duplicate node id {nid!r}", line=line, column=col)
            index[nid] = len(node_ids)
            node_ids.append(nid)
            if "value" in attrs:
                values[nid] = attrs["value"]
        elif key == "edge" and isinstance(val, list):
            attrs = {k: v for k, v, *_ in val if not isinstance(v, list)}
            if "source" not in attrs or "target" not in attrs:
                raise ParseError("edge block needs source and target", line=line, column=col)
            edges.append((attrs["source"], attrs["target"], line, col))

    n = len(node_ids)
    A = np.zeros((n, n), dtype=np.float64)
    for source, target, line, col in edges:
        if source not in index:
            raise DanglingEdge(f"edge references unknown node id {source!r}", line=line, column=col)
        if target not in index:
            raise DanglingEdge(f"edge references unknown node id {target!r}", line=line, column=col)
        i, j = index[source], index[target]
        if i == j:
            continue
        A[i, j] = 1.0
        A[j, i] = 1.0

    truth = None
    raw = None
    if n and len(values) == n:
        raw = tuple(values[nid] for nid in node_ids)
        truth = _contiguize(raw)
    return NetworkDataset(
        name=name,
        adjacency=WeightedAdjacency(A),
        truth=truth,
        node_ids=tuple(node_ids),
        raw_label_values=raw,
    )


def _contiguize(raw_values) -> Labeling:
    """Map raw label values onto 1..K in deterministic sorted order."""
    distinct = set(raw_values)
    if all(isinstance(v, (int, float)) for v in distinct):
        ordered = sorted(distinct)
    else:
        ordered = sorted(distinct, key=str)
    rank = {v: i + 1 for i, v in enumerate(ordered)}
    return Labeling.from_labels([rank[v] for v in raw_values], K=len(ordered))


def write_gml(dataset: NetworkDataset) -> str:
    """Serialize a dataset back to the GML subset read by :func:`parse_gml`."""
    out = ["graph", "[", "  directed 0"]
    truth = dataset.truth.labels if dataset.truth is not None else None
    for i, nid in enumerate(dataset.node_ids):
        out.append("  node")
        out.append("  [")
        out.append(f"    id {nid}")
        if truth is not None:
            out.append(f"    value {int(truth[i])}")
        out.append("  ]")
    A = dataset.adjacency.matrix
    for i, j in zip(*np.nonzero(np.triu(A, k=1))):
        out.append("  edge")
        out.append("  [")
        out.append(f"    source {dataset.node_ids[i]}")
        out.append(f"    target {dataset.node_ids[j]}")
        out.append("  ]")
    out.append("]")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# noise transform
# ---------------------------------------------------------------------------


def add_noise(A: WeightedAdjacency, sigma2: float, seed) -> WeightedAdjacency:
    """Add symmetric i.i.d. Normal(0, sigma2) noise to every entry.

    The upper triangle including the diagonal is drawn and mirrored, so the
    perturbed matrix stays exactly symmetric.  ``sigma2 == 0`` returns the
    input matrix unchanged.
    """
    if sigma2 < 0:
        raise ValueError(f"noise variance must be >= 0, got {sigma2!r}")
    if sigma2 == 0:
        return WeightedAdjacency(A.matrix.copy())
    rng = make_rng(seed)
    n = A.n
    iu, ju = np.triu_indices(n)
    W = np.zeros((n, n), dtype=np.float64)
    vals = rng.normal(0.0, np.sqrt(sigma2), size=iu.shape[0])
    W[iu, ju] = vals
    W[ju, iu] = vals
    return WeightedAdjacency(A.matrix + W)


# ---------------------------------------------------------------------------
# labels, matrices, results
# ---------------------------------------------------------------------------


def read_labels(data) -> Labeling:
    """Parse a label file: one 1-based integer per line, covering {1..K}."""
    text = _as_text(data)
    labels = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            labels.append(int(line))
        except ValueError:
            raise ParseError(f"not an integer label: {line!r}", line=ln, column=1) from None
    if not labels:
        raise ParseError("label file contains no labels")
    K = max(labels)
    if min(labels) < 1 or set(labels) != set(range(1, K + 1)):
        raise NonContiguousLabels(f"labels must cover 1..{K} exactly")
    return Labeling.from_labels(labels, K=K)


def write_labels(path, labeling: Labeling) -> None:
    Path(path).write_text("".join(f"{int(v)}\n" for v in labeling.labels))


def write_matrix_csv(path, M: np.ndarray) -> None:
    """Write a dense matrix as comma-separated shortest-round-trip floats."""
    M = np.asarray(M, dtype=np.float64)
    with open(path, "w") as fh:
        for row in M:
            fh.write(",".join(repr(float(x)) for x in row) + "\n")


def read_matrix_csv(path) -> np.ndarray:
    rows = []
    with open(path) as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                rows.append([float(x) for x in line.split(",")])
            except ValueError as exc:
                raise ParseError(f"bad matrix row: {exc}", line=ln, column=1) from None
    if not rows:
        raise ParseError("matrix file is empty")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ParseError("matrix rows have inconsistent lengths")
    return np.asarray(rows, dtype=np.float64)


RESULTS_HEADER = "experiment,param_name,param_value,replicate,method,error"
SUMMARY_HEADER = "experiment,param_name,param_value,method,mean_error,stderr,replicates"


def write_results_csv(path, records) -> None:
    """Write per-replicate records (one row per method per replicate)."""
    with open(path, "w") as fh:
        fh.write(RESULTS_HEADER + "\n")
        for r in records:
            fh.write(
                f"{r.experiment},{r.param_name},{repr(float(r.param_value))},"
                f"{r.replicate},{r.method},{repr(float(r.error))}\n"
            )


def write_summary_csv(path, rows) -> None:
    """Write per-(parameter value, method) means and standard errors."""
    with open(path, "w") as fh:
        fh.write(SUMMARY_HEADER + "\n")
        for r in rows:
            fh.write(
                f"{r.experiment},{r.param_name},{repr(float(r.param_value))},{r.method},"
                f"{repr(float(r.mean_error))},{repr(float(r.stderr))},{r.replicates}\n"
            )


# ---------------------------------------------------------------------------
# dataset manifest
# ---------------------------------------------------------------------------


def read_manifest(path) -> dict:
    """Parse ``key=value`` lines (blank lines and # comments ignored)."""
    out = {}
    for ln, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError(f"expected key=value, got {line!r}", line=ln, column=1)
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out


def largest_component(ds: NetworkDataset) -> NetworkDataset:
    """Restrict a dataset to its largest connected component.

    Ties between equal-sized components go to the one containing the
    lowest node index.  Labels (and raw label values) are subset along.
    """
    A = ds.adjacency.matrix
    n = ds.n
    seen = np.zeros(n, dtype=bool)
    best: list = []
    for start in range(n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in np.flatnonzero(A[i]):
                if not seen[j]:
                    seen[j] = True
                    stack.append(int(j))
        if len(comp) > len(best):
            best = comp
    keep = np.asarray(sorted(best), dtype=np.intp)
    truth = ds.truth
    if truth is not None:
        truth = _contiguize([int(v) for v in truth.labels[keep]])
    raw = ds.raw_label_values
    if raw is not None:
        raw = tuple(raw[i] for i in keep)
    return NetworkDataset(
        name=ds.name,
        adjacency=WeightedAdjacency(A[np.ix_(keep, keep)]),
        truth=truth,
        node_ids=tuple(ds.node_ids[i] for i in keep),
        raw_label_values=raw,
    )


def _parse_label_map(spec: str) -> dict:
    """Parse ``from:to,from:to`` merge maps; sides compared as strings."""
    out = {}
    for part in spec.split(","):
        if ":" not in part:
            raise ParseError(f"bad label-map entry {part!r}, expected from:to")
        src, _, dst = part.partition(":")
        out[src.strip()] = dst.strip()
    return out


def load_dataset(manifest, name: str, base_dir=None) -> NetworkDataset:
    """Load a dataset named in a manifest.

    Manifest keys for a dataset ``name``:

    * ``name`` — path to the GML file (required);
    * ``name.labels`` — optional label file overriding GML ``value`` attrs;
    * ``name.label_map`` — optional ``from:to,...`` merge map applied to raw
      label values before they are renumbered 1..K;
    * ``name.largest_component`` — set to 1 to keep only the largest
      connected component (some distributed files carry isolated pieces);
    * ``name.k`` — optional expected K, checked after loading.

    Relative paths resolve against ``base_dir`` (or the manifest's own
    directory when ``manifest`` is a path).
    """
    if not isinstance(manifest, dict):
        if base_dir is None:
            base_dir = Path(manifest).parent
        manifest = read_manifest(manifest)
    base = Path(base_dir) if base_dir is not None else Path(".")
    if name not in manifest:
        raise KeyError(f"manifest has no entry for dataset {name!r}")
    gml_path = base / manifest[name]
    ds = parse_gml(gml_path.read_text(), name=name)
    if manifest.get(f"{name}.largest_component", "0").strip() in ("1", "true", "yes"):
        ds = largest_component(ds)

    label_map = None
    if f"{name}.label_map" in manifest:
        label_map = _parse_label_map(manifest[f"{name}.label_map"])

    truth = ds.truth
    if f"{name}.labels" in manifest:
        raw = (base / manifest[f"{name}.labels"]).read_text()
        raw_vals = []
        for ln, line in enumerate(raw.splitlines(), start=1):
            line = line.strip()
            if line:
                raw_vals.append(line)
        if not raw_vals:
            raise ParseError("label file contains no labels")
        if len(raw_vals) != ds.n:
            raise NonContiguousLabels(
                f"label file has {len(raw_vals)} entries for {ds.n} nodes"
            )
        if label_map:
            raw_vals = [label_map.get(v, v) for v in raw_vals]
        truth = _contiguize(raw_vals)
    elif label_map and ds.raw_label_values is not None:
        # merge maps address the file's raw values (as strings)
        mapped = [label_map.get(str(v), str(v)) for v in ds.raw_label_values]
        truth = _contiguize(mapped)

    if f"{name}.k" in manifest:
        expect = int(manifest[f"{name}.k"])
        if truth is None or truth.K != expect:
            found = "no labels" if truth is None else f"K={truth.K}"
            raise NonContiguousLabels(f"dataset {name!r}: expected K={expect}, found {found}")

    return NetworkDataset(name=name, adjacency=ds.adjacency, truth=truth, node_ids=ds.node_ids)

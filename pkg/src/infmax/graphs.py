"""Directed social graphs with per-edge diffusion probabilities and delay
distributions, per-node thresholds and selection costs.

Graphs are stored in CSR form (dense node ids) and treated as immutable once
annotated: every ``assign_*`` function returns a new :class:`Graph` and is a
pure function of its inputs and the rng seed.
"""

import warnings
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Optional

import numpy as np
from scipy.stats import poisson

from .errors import GraphFormatError, InfmaxError

PHI_SUM_TOL = 1e-9

# sub-stream ids used when several attribute draws derive from one master seed
STREAM_PROB = 0
STREAM_COST = 1
STREAM_DELAY = 2
STREAM_THRESHOLD = 3

TRIVALENCY_VALUES = (0.1, 0.01, 0.001)


def derived_rng(seed, stream):
    """Independent numpy generator for (seed, stream)."""
    return np.random.default_rng([int(stream), int(seed) & ((1 << 63) - 1)])


@dataclass(frozen=True)
class DelayDistribution:
    """Finite discrete distribution over delay offsets 1..l."""

    phis: tuple

    def __post_init__(self):
        if len(self.phis) < 1:
            raise InfmaxError("delay distribution needs at least one offset")
        if any(p < 0 for p in self.phis):
            raise InfmaxError("delay probabilities must be non-negative")
        if abs(sum(self.phis) - 1.0) > PHI_SUM_TOL:
            raise InfmaxError(
                f"delay probabilities must sum to 1 (got {sum(self.phis)!r})"
            )

    @property
    def max_offset(self):
        return len(self.phis)


class EdgeAttr(NamedTuple):
    prob: float
    delay: DelayDistribution


class NodeAttr(NamedTuple):
    threshold: float
    cost: int


@dataclass(frozen=True)
class ProbabilitySetting:
    """How edge diffusion probabilities are assigned.

    kind is one of "uniform" (all edges get p), "trivalency" (each edge drawn
    uniformly from {0.1, 0.01, 0.001}), or "from_file" (keep loaded values).
    """

    kind: str
    p: Optional[float] = None

    def __post_init__(self):
        if self.kind not in ("uniform", "trivalency", "from_file"):
            raise InfmaxError(f"unknown probability setting {self.kind!r}")
        if self.kind == "uniform":
            if self.p is None or not (0.0 < self.p <= 1.0):
                raise InfmaxError("uniform probability must lie in (0, 1]")

    @staticmethod
    def parse(text):
        """Parse "uniform:0.1" / "trivalency" / "fromfile" flag syntax."""
        parts = text.strip().lower().split(":")
        if parts[0] == "uniform":
            if len(parts) != 2:
                raise InfmaxError("uniform setting needs a value, e.g. uniform:0.1")
            return ProbabilitySetting("uniform", float(parts[1]))
        if parts[0] == "trivalency" and len(parts) == 1:
            return ProbabilitySetting("trivalency")
        if parts[0] in ("fromfile", "from_file") and len(parts) == 1:
            return ProbabilitySetting("from_file")
        raise InfmaxError(f"cannot parse probability setting {text!r}")


@dataclass
class Graph:
    """Directed graph in CSR form with diffusion annotations.

    Edges are identified by their position in the out-CSR arrays; the in-CSR
    carries ``in_eid`` so in-edges can look up the shared probability array.
    ``delay_pmf``/``delay_cdf`` are (m, L) row-per-edge tables, padded past
    ``delay_len[e]`` (cdf padding is 1.0 so offset draws never overrun).
    """

    n: int
    m: int
    out_ptr: np.ndarray
    out_dst: np.ndarray
    out_prob: np.ndarray
    in_ptr: np.ndarray
    in_src: np.ndarray
    in_eid: np.ndarray
    delay_pmf: np.ndarray
    delay_cdf: np.ndarray
    delay_len: np.ndarray
    threshold: np.ndarray
    cost: np.ndarray
    labels: list
    probs_from_file: bool = False
    _label_to_id: dict = field(default=None, repr=False, compare=False)

    def out_slice(self, u):
        return slice(self.out_ptr[u], self.out_ptr[u + 1])

    def out_neighbors(self, u):
        return self.out_dst[self.out_slice(u)]

    def in_slice(self, u):
        return slice(self.in_ptr[u], self.in_ptr[u + 1])

    def out_degrees(self):
        return np.diff(self.out_ptr)

    def edge_attr(self, eid):
        l = int(self.delay_len[eid])
        return EdgeAttr(
            float(self.out_prob[eid]),
            DelayDistribution(tuple(float(x) for x in self.delay_pmf[eid, :l])),
        )

    def node_attr(self, u):
        return NodeAttr(float(self.threshold[u]), int(self.cost[u]))

    def label_of(self, u):
        return self.labels[u]

    def id_of(self, label):
        if self._label_to_id is None:
            self._label_to_id = {lab: i for i, lab in enumerate(self.labels)}
        try:
            return self._label_to_id[str(label)]
        except KeyError:
            raise GraphFormatError(f"unknown node label {label!r}") from None

    def prob_matrix(self):
        """scipy CSR matrix of edge probabilities (rows = sources)."""
        from scipy.sparse import csr_matrix

        return csr_matrix(
            (self.out_prob, self.out_dst, self.out_ptr), shape=(self.n, self.n)
        )


def _pack_delays(m, rows):
    """Pack per-edge phi vectors into padded pmf/cdf/len arrays."""
    lmax = max((len(r) for r in rows), default=1)
    pmf = np.zeros((m, lmax), dtype=np.float64)
    cdf = np.ones((m, lmax), dtype=np.float64)
    length = np.empty(m, dtype=np.int64)
    for e, phis in enumerate(rows):
        l = len(phis)
        length[e] = l
        pmf[e, :l] = phis
        c = np.cumsum(phis)
        c[-1] = 1.0  # guard the sampler against 1e-9 rounding in the tail
        cdf[e, :l] = c
    return pmf, cdf, length


def build_graph(n, src, dst, prob, labels=None, probs_from_file=False,
                delay_rows=None, threshold=None, cost=None):
    """Assemble a Graph from parallel edge arrays (already deduplicated,
    self-loop free, with dense ids in [0, n))."""
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    prob = np.asarray(prob, dtype=np.float64)
    m = len(src)
    if m and (prob.min() <= 0.0 or prob.max() > 1.0):
        raise GraphFormatError("edge probabilities must lie in (0, 1]")
    if m and ((src == dst).any()):
        raise GraphFormatError("self-loops are not allowed")

    order = np.lexsort((dst, src))
    src, dst, prob = src[order], dst[order], prob[order]
    if delay_rows is not None:
        delay_rows = [delay_rows[i] for i in order]
    else:
        delay_rows = [(1.0,)] * m

    out_ptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(out_ptr, src + 1, 1)
    np.cumsum(out_ptr, out=out_ptr)

    in_order = np.lexsort((src, dst))
    in_src = src[in_order]
    in_eid = in_order.astype(np.int64)
    in_ptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(in_ptr, dst[in_order] + 1, 1)
    np.cumsum(in_ptr, out=in_ptr)

    pmf, cdf, dlen = _pack_delays(m, delay_rows)
    if threshold is None:
        threshold = np.zeros(n, dtype=np.float64)
    if cost is None:
        cost = np.ones(n, dtype=np.int64)
    if labels is None:
        labels = [str(i) for i in range(n)]

    return Graph(
        n=n, m=m,
        out_ptr=out_ptr, out_dst=dst, out_prob=prob,
        in_ptr=in_ptr, in_src=in_src, in_eid=in_eid,
        delay_pmf=pmf, delay_cdf=cdf, delay_len=dlen,
        threshold=np.asarray(threshold, dtype=np.float64),
        cost=np.asarray(cost, dtype=np.int64),
        labels=list(labels),
        probs_from_file=probs_from_file,
    )


def _dense_label_order(labels):
    """Deterministic label -> dense id order: numeric when every label parses
    as an integer, lexicographic otherwise."""
    try:
        return sorted(labels, key=int)
    except ValueError:
        return sorted(labels)


def load_edge_list(path, directed=True):
    """Load a whitespace-separated edge list ("src dst" or "src dst prob").

    Lines starting with '#' are comments.  Undirected input materializes both
    directions.  Duplicate directed edges collapse keeping the first
    probability; self-loops are dropped with a warning.
    """
    raw = []
    any_prob = False
    all_prob = True
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise GraphFormatError(f"cannot read {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) < 2:
                raise GraphFormatError(
                    f"{path}: line {lineno}: expected 'src dst [prob]'"
                )
            p = None
            if len(tokens) >= 3:
                try:
                    p = float(tokens[2])
                except ValueError:
                    raise GraphFormatError(
                        f"{path}: line {lineno}: bad probability {tokens[2]!r}"
                    ) from None
                if not (0.0 < p <= 1.0):
                    raise GraphFormatError(
                        f"{path}: line {lineno}: probability {p} outside (0, 1]"
                    )
                any_prob = True
            else:
                all_prob = False
            raw.append((tokens[0], tokens[1], p))

    labels = set()
    for s, d, _ in raw:
        labels.add(s)
        labels.add(d)
    ordered = _dense_label_order(labels)
    index = {lab: i for i, lab in enumerate(ordered)}

    edges = {}
    self_loops = 0
    for s, d, p in raw:
        si, di = index[s], index[d]
        pairs = [(si, di)] if directed else [(si, di), (di, si)]
        for a, b in pairs:
            if a == b:
                self_loops += 1
                continue
            if (a, b) not in edges:
                edges[(a, b)] = p
    if self_loops:
        warnings.warn(f"{path}: dropped {self_loops} self-loop(s)", stacklevel=2)

    n = len(ordered)
    src = np.fromiter((k[0] for k in edges), dtype=np.int64, count=len(edges))
    dst = np.fromiter((k[1] for k in edges), dtype=np.int64, count=len(edges))
    prob = np.fromiter(
        (1.0 if p is None else p for p in edges.values()),
        dtype=np.float64, count=len(edges),
    )
    return build_graph(
        n, src, dst, prob,
        labels=ordered,
        probs_from_file=bool(raw) and any_prob and all_prob,
    )


def write_edge_list(g, path):
    """Write the graph back out as "src dst prob" lines (round-trippable)."""
    with open(path, "w", encoding="utf-8") as fh:
        for u in range(g.n):
            for k in range(g.out_ptr[u], g.out_ptr[u + 1]):
                fh.write(f"{g.labels[u]} {g.labels[g.out_dst[k]]} "
                         f"{float(g.out_prob[k])!r}\n")


def assign_probabilities(g, setting, rng_seed=0):
    """Return a copy of g with edge probabilities set per `setting`."""
    if setting.kind == "uniform":
        prob = np.full(g.m, setting.p, dtype=np.float64)
    elif setting.kind == "trivalency":
        rng = derived_rng(rng_seed, STREAM_PROB)
        prob = rng.choice(np.array(TRIVALENCY_VALUES), size=g.m)
    else:  # from_file
        if not g.probs_from_file:
            raise InfmaxError(
                "probability setting from_file requires every edge to carry "
                "a probability in the input file"
            )
        return replace(g, _label_to_id=None)
    return replace(g, out_prob=prob, probs_from_file=False, _label_to_id=None)


def assign_costs(g, lo, hi, rng_seed=0):
    """Return a copy of g with integer node costs drawn uniformly from [lo, hi]."""
    lo, hi = int(lo), int(hi)
    if lo < 1 or lo > hi:
        raise InfmaxError(f"cost interval [{lo}, {hi}] must satisfy 1 <= lo <= hi")
    rng = derived_rng(rng_seed, STREAM_COST)
    cost = rng.integers(lo, hi + 1, size=g.n, dtype=np.int64)
    return replace(g, cost=cost, _label_to_id=None)


def truncated_poisson_pmf(lam, max_offset):
    """Probability mass over delay offsets 1..max_offset: a Poisson pmf
    evaluated at k = offset-1 and renormalized onto the finite support."""
    pmf = poisson.pmf(np.arange(max_offset), mu=lam)
    total = pmf.sum()
    if total <= 0.0:
        raise InfmaxError(f"degenerate truncated Poisson (lambda={lam})")
    return pmf / total


def assign_delay_distributions(g, lambda_min, lambda_max, max_offset, rng_seed=0):
    """Return a copy of g where each node u draws lambda_u uniformly from
    [lambda_min, lambda_max] and all of u's out-edges share the truncated
    Poisson(lambda_u) delay distribution on offsets 1..max_offset."""
    lambda_min, lambda_max = int(lambda_min), int(lambda_max)
    max_offset = int(max_offset)
    if lambda_min < 1 or lambda_min > lambda_max:
        raise InfmaxError("need 1 <= lambda_min <= lambda_max")
    if max_offset < 1:
        raise InfmaxError("max_offset must be >= 1")
    rng = derived_rng(rng_seed, STREAM_DELAY)
    lam = rng.integers(lambda_min, lambda_max + 1, size=g.n)

    table = {l: truncated_poisson_pmf(l, max_offset)
             for l in np.unique(lam)}
    pmf = np.zeros((g.m, max_offset), dtype=np.float64)
    for u in range(g.n):
        s = g.out_slice(u)
        if s.stop > s.start:
            pmf[s] = table[lam[u]]
    cdf = np.cumsum(pmf, axis=1)
    if g.m:
        cdf[:, -1] = 1.0
    dlen = np.full(g.m, max_offset, dtype=np.int64)
    return replace(g, delay_pmf=pmf, delay_cdf=cdf, delay_len=dlen,
                   _label_to_id=None)


def assign_thresholds(g, mode, rng_seed=0):
    """Return a copy of g with node thresholds set.

    mode "zero" sets every threshold to 0 (coin-flip cascade semantics);
    mode "uniform" draws each threshold uniformly from [0, 1].
    """
    if mode == "zero":
        thr = np.zeros(g.n, dtype=np.float64)
    elif mode == "uniform":
        rng = derived_rng(rng_seed, STREAM_THRESHOLD)
        thr = rng.random(g.n)
    else:
        raise InfmaxError(f"unknown threshold mode {mode!r}")
    return replace(g, threshold=thr, _label_to_id=None)


class GraphStats(NamedTuple):
    n: int
    m: int
    avg_degree: float
    max_out_degree: int


def graph_stats(g):
    """Basic statistics; avg_degree is directed edges per node (m / n)."""
    if g.n == 0:
        raise InfmaxError("empty graph")
    degs = g.out_degrees()
    return GraphStats(g.n, g.m, g.m / g.n, int(degs.max()) if g.m else 0)


def validate_graph(g):
    """Check structural invariants; raises InfmaxError on violation."""
    if g.out_ptr[-1] != g.m or g.in_ptr[-1] != g.m:
        raise InfmaxError("adjacency pointer totals disagree with m")
    out_edges = set()
    for u in range(g.n):
        for k in range(g.out_ptr[u], g.out_ptr[u + 1]):
            v = int(g.out_dst[k])
            if v == u:
                raise InfmaxError("self-loop present")
            if (u, v) in out_edges:
                raise InfmaxError("duplicate edge present")
            out_edges.add((u, v))
    in_edges = set()
    for v in range(g.n):
        for k in range(g.in_ptr[v], g.in_ptr[v + 1]):
            u = int(g.in_src[k])
            in_edges.add((u, v))
            eid = int(g.in_eid[k])
            if int(g.out_dst[eid]) != v:
                raise InfmaxError("in_eid does not point at a (.., v) edge")
    if in_edges != out_edges:
        raise InfmaxError("in/out adjacency describe different edge sets")
    if g.m:
        sums = np.array([g.delay_pmf[e, :g.delay_len[e]].sum() for e in range(g.m)])
        if (np.abs(sums - 1.0) > PHI_SUM_TOL).any():
            raise InfmaxError("delay distribution rows must sum to 1")
        if (g.delay_pmf < 0).any():
            raise InfmaxError("negative delay probability")
    if ((g.threshold < 0) | (g.threshold > 1)).any():
        raise InfmaxError("thresholds must lie in [0, 1]")
    if (g.cost < 1).any():
        raise InfmaxError("costs must be positive integers")
    return True


# ---------------------------------------------------------------------------
# annotated-graph and label-map files

ANNOTATED_HEADER = "# annotated influence graph v1"


def write_annotated(g, path, note=None):
    """Write the self-describing annotated format:

    [nodes] lines "id threshold cost", [edges] lines "src dst prob phi_1 ...".
    Floats are written with repr() so a reload is bit-exact.
    """
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(ANNOTATED_HEADER + "\n")
        if note is not None:
            fh.write(f"# note: {note}\n")
        fh.write("[nodes]\n")
        for u in range(g.n):
            fh.write(f"{u} {float(g.threshold[u])!r} {int(g.cost[u])}\n")
        fh.write("[edges]\n")
        for u in range(g.n):
            for k in range(g.out_ptr[u], g.out_ptr[u + 1]):
                phis = " ".join(
                    repr(float(x)) for x in g.delay_pmf[k, : g.delay_len[k]]
                )
                fh.write(f"{u} {int(g.out_dst[k])} {float(g.out_prob[k])!r} {phis}\n")


def read_annotated(path):
    """Read a file produced by write_annotated.

    A label map written beside it (path + ".labels") is picked up
    automatically; otherwise labels default to the dense ids.
    """
    section = None
    nodes = []
    edges = []
    try:
        fh = open(path, "r", encoding="utf-8")
    except OSError as exc:
        raise GraphFormatError(f"cannot read {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if line == "[nodes]":
                section = "nodes"
                continue
            if line == "[edges]":
                section = "edges"
                continue
            tokens = line.split()
            try:
                if section == "nodes":
                    if len(tokens) != 3:
                        raise ValueError("expected 'id threshold cost'")
                    nodes.append((int(tokens[0]), float(tokens[1]), int(tokens[2])))
                elif section == "edges":
                    if len(tokens) < 4:
                        raise ValueError("expected 'src dst prob phi...'")
                    edges.append((int(tokens[0]), int(tokens[1]), float(tokens[2]),
                                  tuple(float(t) for t in tokens[3:])))
                else:
                    raise ValueError("data before [nodes]/[edges] section")
            except ValueError as exc:
                raise GraphFormatError(f"{path}: line {lineno}: {exc}") from None
    if not nodes:
        raise GraphFormatError(f"{path}: no [nodes] section")
    n = len(nodes)
    ids = [t[0] for t in nodes]
    if sorted(ids) != list(range(n)):
        raise GraphFormatError(f"{path}: node ids must be dense 0..n-1")
    threshold = np.zeros(n)
    cost = np.ones(n, dtype=np.int64)
    for i, thr, c in nodes:
        threshold[i], cost[i] = thr, c

    labels = None
    try:
        labels_by_id = read_label_map(str(path) + ".labels")
        if len(labels_by_id) == n:
            labels = labels_by_id
    except (GraphFormatError, OSError):
        labels = None

    src = [e[0] for e in edges]
    dst = [e[1] for e in edges]
    prob = [e[2] for e in edges]
    rows = [e[3] for e in edges]
    g = build_graph(n, src, dst, prob, labels=labels, probs_from_file=True,
                    delay_rows=rows, threshold=threshold, cost=cost)
    validate_graph(g)
    return g


def write_label_map(g, path):
    with open(path, "w", encoding="utf-8") as fh:
        for i, lab in enumerate(g.labels):
            fh.write(f"{lab} {i}\n")


def read_label_map(path):
    """Return labels indexed by dense id."""
    pairs = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) != 2:
                raise GraphFormatError(
                    f"{path}: line {lineno}: expected 'label dense_id'"
                )
            pairs.append((tokens[0], int(tokens[1])))
    labels = [""] * len(pairs)
    for lab, i in pairs:
        if not (0 <= i < len(pairs)):
            raise GraphFormatError(f"{path}: dense id {i} out of range")
        labels[i] = lab
    return labels

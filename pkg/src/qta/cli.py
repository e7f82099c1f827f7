"""Command line front end.

Automaton files are JSON: {"kind": "dqta"|"qta", "h": .., "k": .., "l": ..,
"matrix": [[[re, im], ...], ...], "labels": ...} with the matrix row-major
over the H (x) interface basis (state factor outermost) and every entry a
two-element [re, im] pair.  A qta record omits "l" and stores its rank in
"k".  Labels are optional and purely presentational: {"input": [...],
"output": [...]} for dqta, a single list for qta.  They are validated
against the interface dims and dropped before any algebra.

The cell builder makes one tape cell: state space of alphabet_bits qubits,
input and output interfaces split as left summands "(L,i)" then right
summands "(R,i)" for i = 1..states.  The default rule is the pass-through
permutation (enter left, leave right, keep state and symbol).  A rule
table lists [[dir, state, symbol], [dir', state', symbol']] pairs; missing
configurations stay fixed, and the total map must be a bijection.

Chaining wires the right output of cell i to the left input of cell i+1
and the left output of cell i+1 back to the right input of cell i, leaving
one cell's left+right boundary as the external interface.  --mirror flips
which neighbour a left-moving output feeds: left outputs then wire forward
(cell i to cell i+1) and right outputs backward, so labels track direction
of motion instead of the boundary being crossed.  --ring feeds the outer
boundary pair back as well, leaving no interface.

Exit codes: 0 success or all laws pass, 1 validation or law failure,
2 usage errors.
"""

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from .axioms import (
    LAW_GROUPS,
    CheckConfig,
    run_checks,
    serialize_reports,
    suite_passed,
)
from .dqta import (
    COMPOSITE_TOL,
    DQTA_TOL,
    Dqta,
    UnitaryDqta,
    cascade,
    feedback_dqta,
    make_dqta,
    make_unitary_dqta,
    turing_tensor,
)
from .intcat import Qta, as_int0, bidirectionalize, make_qta, name_of
from .linalg import (
    Operator,
    block_perm,
    identity,
    isometry_defect,
    kron,
    sum_swap,
    unitary_defect,
)

NORM_TOL = 1e-9

DIRECTIONS = ("L", "R")


@dataclass(frozen=True)
class AutomatonFile:
    """One parsed record; labels kept verbatim (None when absent)."""
    kind: str
    h: int
    k: int
    l: int
    matrix: object
    labels: object


@dataclass(frozen=True)
class SimulationTrace:
    steps: int
    masses: tuple
    total_norm: tuple


# ------------------------------------------------------------------ file I/O

def _entries_to_matrix(rows, shape, path):
    expected_rows, expected_cols = shape
    if not isinstance(rows, list) or len(rows) != expected_rows:
        raise ValueError(
            f"{path}: field 'matrix' must have {expected_rows} rows, "
            f"got {len(rows) if isinstance(rows, list) else type(rows).__name__}")
    if expected_rows == 0 or expected_cols == 0:
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != expected_cols:
                raise ValueError(
                    f"{path}: matrix row {i} must have {expected_cols} entries")
        return np.zeros(shape, dtype=complex)
    try:
        arr = np.asarray(rows, dtype=float)
    except (TypeError, ValueError):
        arr = None
    if arr is None or arr.shape != (expected_rows, expected_cols, 2):
        # walk the structure to name the offending row or entry
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != expected_cols:
                raise ValueError(
                    f"{path}: matrix row {i} must have {expected_cols} entries")
            for j, entry in enumerate(row):
                if (not isinstance(entry, list) or len(entry) != 2
                        or not all(isinstance(x, (int, float))
                                   and not isinstance(x, bool) for x in entry)):
                    raise ValueError(
                        f"{path}: matrix entry ({i},{j}) must be a [re, im] pair")
        raise ValueError(f"{path}: malformed matrix")
    return arr[..., 0] + 1j * arr[..., 1]


def _matrix_to_entries(op):
    return np.stack([op.mat.real, op.mat.imag], axis=-1).tolist()


def _require_int(record, field, path):
    value = record.get(field)
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise ValueError(f"{path}: field '{field}' must be a nonnegative integer")
    return value


def _check_label_list(values, n, where, path):
    if (not isinstance(values, list) or len(values) != n
            or not all(isinstance(s, str) for s in values)):
        raise ValueError(
            f"{path}: {where} labels must be a list of {n} strings")
    return tuple(values)


def load_record(path) -> AutomatonFile:
    """Read and structurally validate one automaton file."""
    try:
        with open(path) as fh:
            record = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValueError(
            f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(record, dict):
        raise ValueError(f"{path}: top level must be an object")
    kind = record.get("kind")
    if kind not in ("dqta", "qta"):
        raise ValueError(f"{path}: field 'kind' must be 'dqta' or 'qta'")
    h = _require_int(record, "h", path)
    k = _require_int(record, "k", path)
    if h < 1:
        raise ValueError(f"{path}: field 'h' must be positive")
    if kind == "dqta":
        l = _require_int(record, "l", path)
        shape = (h * l, h * k)
    else:
        if "l" in record:
            raise ValueError(f"{path}: qta records store their rank in 'k'; "
                             "field 'l' is not allowed")
        l = k
        shape = (h * k, h * k)
    if "matrix" not in record:
        raise ValueError(f"{path}: missing field 'matrix'")
    matrix = _entries_to_matrix(record["matrix"], shape, path)
    labels = record.get("labels")
    if labels is not None:
        if kind == "dqta":
            if not isinstance(labels, dict) or set(labels) != {"input", "output"}:
                raise ValueError(f"{path}: dqta labels must be an object with "
                                 "'input' and 'output' lists")
            labels = {"input": _check_label_list(labels["input"], k, "input", path),
                      "output": _check_label_list(labels["output"], l, "output", path)}
        else:
            labels = _check_label_list(labels, k, "interface", path)
    return AutomatonFile(kind, h, k, l, matrix, labels)


def _build_value(record: AutomatonFile):
    if record.kind == "qta":
        return make_qta(record.h, record.k, Operator(record.matrix))
    tau = Operator(record.matrix)
    if record.k == record.l and unitary_defect(tau) <= DQTA_TOL:
        return make_unitary_dqta(record.h, record.k, tau)
    return make_dqta(record.h, record.k, record.l, tau)


def parse_automaton(path):
    """Dqta or Qta from a file; unitary square transitions come back as
    UnitaryDqta."""
    return _build_value(load_record(path))


def write_automaton(value, path, labels=None):
    if isinstance(value, Qta):
        record = {"kind": "qta", "h": value.h, "k": value.n,
                  "matrix": _matrix_to_entries(value.tau)}
        if labels is not None:
            record["labels"] = list(
                _check_label_list(list(labels), value.n, "interface", path))
    elif isinstance(value, Dqta):
        record = {"kind": "dqta", "h": value.h, "k": value.k, "l": value.l,
                  "matrix": _matrix_to_entries(value.tau)}
        if labels is not None:
            record["labels"] = {
                "input": list(_check_label_list(
                    list(labels["input"]), value.k, "input", path)),
                "output": list(_check_label_list(
                    list(labels["output"]), value.l, "output", path))}
    else:
        raise ValueError(f"cannot serialize {type(value).__name__}")
    with open(path, "w") as fh:
        json.dump(record, fh)
        fh.write("\n")


# ------------------------------------------------------------- cell builders

def cell_labels(states):
    return tuple(f"({d},{i})" for d in DIRECTIONS
                 for i in range(1, states + 1))


def _config_index(states, h, entry, what):
    if (not isinstance(entry, (list, tuple)) or len(entry) != 3):
        raise ValueError(f"rule {what} {entry!r} must be [dir, state, symbol]")
    direction, state, symbol = entry
    if direction not in DIRECTIONS:
        raise ValueError(f"rule {what} direction must be 'L' or 'R', "
                         f"got {direction!r}")
    if not isinstance(state, int) or not 1 <= state <= states:
        raise ValueError(f"rule {what} state must be in 1..{states}, "
                         f"got {state!r}")
    if not isinstance(symbol, int) or not 0 <= symbol < h:
        raise ValueError(f"rule {what} symbol must be in 0..{h - 1}, "
                         f"got {symbol!r}")
    iface = DIRECTIONS.index(direction) * states + (state - 1)
    return symbol * (2 * states) + iface


def _rule_permutation(states, h, pairs):
    n = h * 2 * states
    mapping = {}
    targets = set()
    for pair in pairs:
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ValueError(f"rule entry {pair!r} must be a [source, target] pair")
        src = _config_index(states, h, pair[0], "source")
        dst = _config_index(states, h, pair[1], "target")
        if src in mapping:
            raise ValueError(f"rule lists source {pair[0]!r} twice")
        if dst in targets:
            raise ValueError(f"rule lists target {pair[1]!r} twice")
        mapping[src] = dst
        targets.add(dst)
    if targets != set(mapping):
        raise ValueError("rule table is not a bijection: listed sources and "
                         "targets must cover the same configurations")
    mat = np.zeros((n, n))
    for src in range(n):
        mat[mapping.get(src, src), src] = 1.0
    return Operator(mat)


def build_cell(states, alphabet_bits, rule=None) -> UnitaryDqta:
    """One tape cell; see the module docstring for layout and rules."""
    if states < 1:
        raise ValueError(f"states must be positive, got {states}")
    if alphabet_bits < 0:
        raise ValueError(f"alphabet_bits must be nonnegative, got {alphabet_bits}")
    h = 2 ** alphabet_bits
    width = 2 * states
    if rule is None:
        tau = kron(identity(h), sum_swap(states, states))
    elif isinstance(rule, Operator):
        tau = rule
    elif isinstance(rule, np.ndarray):
        tau = Operator(rule)
    else:
        tau = _rule_permutation(states, h, rule)
    return make_unitary_dqta(h, width, tau)


def _stateless(op):
    return make_unitary_dqta(1, op.mat.shape[0], op)


def chain_cells(cell, n, mirror=False, ring=False) -> UnitaryDqta:
    """Tape segment of n copies of cell, wired as in the module docstring.

    The merge routes the internal pair to the leading position and feeds
    it back, so the external interface stays one cell's boundary and the
    state dimension multiplies to cell.h ** n.  Default wiring pairs the
    left part's right output with the right part's left input and vice
    versa; under mirror the left part's left output feeds the right part's
    left input and the right part's right output feeds the left part's
    right input, so the composite's left outputs sit at its right end.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if cell.k != cell.l or cell.k % 2 or cell.k == 0:
        raise ValueError("cell interfaces must split into left and right "
                         f"halves, got k={cell.k}, l={cell.l}")
    s = cell.k // 2
    route_in = block_perm([s] * 4, [2, 1, 0, 3])
    route_out = block_perm([s] * 4, [0, 3, 2, 1] if mirror else [2, 0, 1, 3])
    chain = cell
    for _ in range(n - 1):
        x = turing_tensor(chain, cell)
        # composing with a stateless route automaton is exactly this
        # conjugation, so apply it in one pass instead of two cascades
        routed = Operator(kron(identity(x.h), route_out).mat
                          @ x.tau.mat
                          @ kron(identity(x.h), route_in).mat)
        chain = feedback_dqta(
            make_dqta(x.h, x.k, x.l, routed, tol=COMPOSITE_TOL), 2 * s)
    if ring:
        # default wiring wraps right outputs around to left inputs, which
        # needs the half swap; mirrored wiring closes up positionally
        if mirror:
            chain = feedback_dqta(chain, 2 * s)
        else:
            closer = _stateless(block_perm([s, s], [1, 0]))
            chain = feedback_dqta(cascade(chain, closer), 2 * s)
    return make_unitary_dqta(chain.h, chain.k, chain.tau, tol=COMPOSITE_TOL)


# -------------------------------------------------------------- simulation

def simulate(q, initial, steps) -> SimulationTrace:
    """Repeated application of the transition, recording per-summand masses.

    initial is either a full state vector of length h*n or a pair
    (interface index, state-factor basis index).
    """
    if isinstance(q, Qta):
        h, n, tau = q.h, q.n, q.tau
    elif isinstance(q, Dqta):
        if q.k != q.l:
            raise ValueError("simulation needs a square transition, "
                             f"got k={q.k}, l={q.l}")
        h, n, tau = q.h, q.k, q.tau
    else:
        raise ValueError(f"cannot simulate {type(q).__name__}")
    if n == 0:
        raise ValueError("automaton has no interface to carry the control")
    if steps < 0:
        raise ValueError(f"steps must be nonnegative, got {steps}")
    if isinstance(initial, tuple) and len(initial) == 2 \
            and all(isinstance(x, int) for x in initial):
        iface, basis = initial
        if not 0 <= iface < n:
            raise ValueError(f"interface index {iface} out of range 0..{n - 1}")
        if not 0 <= basis < h:
            raise ValueError(f"basis index {basis} out of range 0..{h - 1}")
        v = np.zeros(h * n, dtype=complex)
        v[basis * n + iface] = 1.0
    else:
        v = np.asarray(initial, dtype=complex).reshape(-1)
        if v.shape[0] != h * n:
            raise ValueError(f"initial state must have length {h * n}, "
                             f"got {v.shape[0]}")
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"initial state norm {norm:.12g} is not 1")
    masses = []
    norms = []
    for step in range(steps + 1):
        if step > 0:
            v = tau.mat @ v
        per = np.abs(v.reshape(h, n)) ** 2
        summed = per.sum(axis=0)
        masses.append(tuple(float(x) for x in summed))
        norms.append(float(summed.sum()))
    return SimulationTrace(steps, tuple(masses), tuple(norms))


# ------------------------------------------------------------------ commands

def _dqta_from(path):
    value = parse_automaton(path)
    if not isinstance(value, Dqta):
        raise ValueError(f"{path}: expected a dqta record, got qta")
    return value


def _print_written(value, path):
    if isinstance(value, Qta):
        print(f"wrote {path}: qta h={value.h} k={value.n}")
    else:
        print(f"wrote {path}: dqta h={value.h} k={value.k} l={value.l}")


def _cmd_validate(args):
    record = load_record(args.file)
    value = _build_value(record)
    if isinstance(value, Qta):
        defect = unitary_defect(value.tau)
        print(f"{args.file}: qta h={value.h} k={value.n} "
              f"unitary defect {defect:.3g}")
    else:
        defect = isometry_defect(value.tau)
        print(f"{args.file}: dqta h={value.h} k={value.k} l={value.l} "
              f"isometry defect {defect:.3g}")
    return 0


def _cmd_compose(args):
    first, second = load_record(args.first), load_record(args.second)
    for rec, path in ((first, args.first), (second, args.second)):
        if rec.kind != "dqta":
            raise ValueError(f"{path}: compose works on dqta records")
    out = cascade(_build_value(first), _build_value(second))
    labels = None
    if first.labels and second.labels:
        labels = {"input": first.labels["input"],
                  "output": second.labels["output"]}
    write_automaton(out, args.output, labels)
    _print_written(out, args.output)
    return 0


def _cmd_tensor(args):
    first, second = load_record(args.first), load_record(args.second)
    for rec, path in ((first, args.first), (second, args.second)):
        if rec.kind != "dqta":
            raise ValueError(f"{path}: tensor works on dqta records")
    out = turing_tensor(_build_value(first), _build_value(second))
    labels = None
    if first.labels and second.labels:
        labels = {"input": first.labels["input"] + second.labels["input"],
                  "output": first.labels["output"] + second.labels["output"]}
    write_automaton(out, args.output, labels)
    _print_written(out, args.output)
    return 0


def _cmd_feedback(args):
    record = load_record(args.file)
    if record.kind != "dqta":
        raise ValueError(f"{args.file}: feedback works on dqta records")
    out = feedback_dqta(_build_value(record), args.u)
    labels = None
    if record.labels:
        labels = {"input": record.labels["input"][args.u:],
                  "output": record.labels["output"][args.u:]}
    write_automaton(out, args.output, labels)
    _print_written(out, args.output)
    return 0


def _lr_split(record):
    """Size of the leading left block when labels split as (L,*) then (R,*);
    None otherwise."""
    if not record.labels or record.kind != "dqta":
        return None
    ins, outs = record.labels["input"], record.labels["output"]
    if ins != outs or not ins:
        return None
    src = sum(1 for s in ins if s.startswith("(L,"))
    if 0 < src < len(ins) and all(s.startswith("(L,") for s in ins[:src]) \
            and all(s.startswith("(R,") for s in ins[src:]):
        return src
    return None


def _cmd_bidir(args):
    record = load_record(args.file)
    if record.kind != "dqta":
        raise ValueError(f"{args.file}: already a qta record")
    value = _build_value(record)
    src = _lr_split(record)
    route = args.route
    if route == "auto":
        route = "name" if (src is not None
                           and isinstance(value, UnitaryDqta)) else "functor"
    if route == "name":
        if src is None:
            raise ValueError(f"{args.file}: the name route needs matching "
                             "(L,*)/(R,*) interface labels")
        if not isinstance(value, UnitaryDqta):
            raise ValueError(f"{args.file}: the name route needs a unitary "
                             "square transition")
        out = name_of(as_int0(value, src))
        labels = record.labels["input"] if record.labels else None
    else:
        out = bidirectionalize(value)
        labels = None
        if record.labels:
            labels = record.labels["input"] + record.labels["output"]
    write_automaton(out, args.output, labels)
    print(f"wrote {args.output}: qta h={out.h} k={out.n} via {route} route")
    return 0


def _load_rule(path):
    try:
        with open(path) as fh:
            rule = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if isinstance(rule, list):
        return rule
    if isinstance(rule, dict) and "matrix" in rule:
        rows = rule["matrix"]
        if not isinstance(rows, list) or not rows:
            raise ValueError(f"{path}: rule matrix must be a nonempty list")
        size = len(rows)
        return _entries_to_matrix(rows, (size, size), path)
    raise ValueError(f"{path}: rule must be a list of pairs or an object "
                     "with a 'matrix' field")


def _cmd_cell(args):
    rule = _load_rule(args.rule) if args.rule else None
    cell = build_cell(args.states, args.bits, rule)
    labels = {"input": cell_labels(args.states),
              "output": cell_labels(args.states)}
    write_automaton(cell, args.output, labels)
    _print_written(cell, args.output)
    return 0


def _cmd_chain(args):
    record = load_record(args.file)
    if record.kind != "dqta":
        raise ValueError(f"{args.file}: chain works on dqta records")
    src = _lr_split(record)
    if src is None or 2 * src != record.k:
        raise ValueError(f"{args.file}: chain needs interfaces labeled as "
                         "matching (L,*) and (R,*) halves")
    value = _build_value(record)
    out = chain_cells(value, args.n, mirror=args.mirror, ring=args.ring)
    if args.ring:
        labels = {"input": (), "output": ()}
    else:
        labels = record.labels
    write_automaton(out, args.output, labels)
    _print_written(out, args.output)
    return 0


def _cmd_simulate(args):
    value = parse_automaton(args.file)
    trace = simulate(value, (args.start, 0), args.steps)
    for step in range(trace.steps + 1):
        record = {"step": step,
                  "masses": list(trace.masses[step]),
                  "total_norm": trace.total_norm[step]}
        print(json.dumps(record))
    return 0


def _cmd_axioms(args):
    cfg = CheckConfig(seed=args.seed, instances=args.instances,
                      max_dim=args.max_dim, tolerance=args.tol,
                      law_set=tuple(args.laws) if args.laws else LAW_GROUPS)
    reports = run_checks(cfg)
    sys.stdout.write(serialize_reports(reports))
    return 0 if suite_passed(reports) else 1


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="qta",
        description="quantum Turing automata: compose, close loops, "
                    "bidirectionalize, simulate, and check laws")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check one automaton file")
    p.add_argument("file")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("compose", help="cascade two automata")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_compose)

    p = sub.add_parser("tensor", help="run two automata side by side")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_tensor)

    p = sub.add_parser("feedback", help="feed leading output summands back")
    p.add_argument("file")
    p.add_argument("--u", type=int, required=True,
                   help="number of leading summands to close")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_feedback)

    p = sub.add_parser("bidir", help="bidirectionalize into a qta record")
    p.add_argument("file")
    p.add_argument("--route", choices=("auto", "name", "functor"),
                   default="auto")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_bidir)

    p = sub.add_parser("cell", help="build one tape cell")
    p.add_argument("--states", type=int, required=True)
    p.add_argument("--bits", type=int, required=True)
    p.add_argument("--rule", help="JSON rule table or {'matrix': ...} file")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_cell)

    p = sub.add_parser("chain", help="wire n copies of a cell into a segment")
    p.add_argument("file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mirror", action="store_true",
                   help="flip which neighbour a left-moving output feeds")
    p.add_argument("--ring", action="store_true",
                   help="also close the outer boundary pair")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_chain)

    p = sub.add_parser("simulate", help="run the control particle")
    p.add_argument("file")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--start", type=int, default=0,
                   help="interface summand the control starts on")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("axioms", help="run the law suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--instances", type=int, default=200)
    p.add_argument("--max-dim", type=int, default=6)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--laws", nargs="+", choices=LAW_GROUPS,
                   help="law groups to run (default: all)")
    p.set_defaults(func=_cmd_axioms)

    return parser


def run_command(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else int(exc.code)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    raise SystemExit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()

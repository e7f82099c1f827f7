import glob
import json
import os

import numpy as np
import pytest

from qta.cli import (
    AutomatonFile,
    build_cell,
    cell_labels,
    chain_cells,
    load_record,
    parse_automaton,
    run_command,
    simulate,
    write_automaton,
)
from qta.dqta import Dqta, UnitaryDqta, make_dqta, unit_automata
from qta.intcat import Qta, as_int0, bidirectionalize, int_compose, make_qta, name_of
from qta.linalg import (
    IsometryError,
    Operator,
    identity,
    isometry_defect,
    kron,
    op_distance,
    random_isometry,
    sum_swap,
    unitary_defect,
)

DATA_DIR = os.path.join(os.path.dirname(__file__), "..", "data")


def rand_dqta(h, k, l, seed):
    return make_dqta(h, k, l, random_isometry(h * l, h * k, seed))


# ----------------------------------------------------------------- file I/O

def test_round_trip_is_exact_for_dqta(tmp_path):
    t = rand_dqta(2, 3, 4, 11)
    path = str(tmp_path / "t.json")
    labels = {"input": ("a", "b", "c"), "output": ("p", "q", "r", "s")}
    write_automaton(t, path, labels)
    back = parse_automaton(path)
    assert isinstance(back, Dqta)
    assert (back.h, back.k, back.l) == (2, 3, 4)
    assert np.array_equal(back.tau.mat, t.tau.mat)
    record = load_record(path)
    assert record.labels == labels


def test_round_trip_is_exact_for_qta(tmp_path):
    q = make_qta(2, 3, random_isometry(6, 6, 4))
    path = str(tmp_path / "q.json")
    write_automaton(q, path, ("x", "y", "z"))
    back = parse_automaton(path)
    assert isinstance(back, Qta)
    assert (back.h, back.n) == (2, 3)
    assert np.array_equal(back.tau.mat, q.tau.mat)
    assert load_record(path).labels == ("x", "y", "z")


def test_square_unitary_parses_as_unitary_dqta(tmp_path):
    path = str(tmp_path / "u.json")
    write_automaton(unit_automata(2, 2)[0], path)
    assert isinstance(parse_automaton(path), UnitaryDqta)


def test_non_isometric_matrix_is_rejected_with_defect(tmp_path):
    path = str(tmp_path / "bad.json")
    with open(path, "w") as fh:
        json.dump({"kind": "dqta", "h": 1, "k": 1, "l": 1,
                   "matrix": [[[0.5, 0.0]]]}, fh)
    with pytest.raises(IsometryError, match="defect"):
        parse_automaton(path)


def test_malformed_json_reports_position(tmp_path):
    path = str(tmp_path / "broken.json")
    with open(path, "w") as fh:
        fh.write('{"kind": "dqta", \n  oops')
    with pytest.raises(ValueError, match=r"broken\.json:2:3"):
        load_record(path)


def test_missing_and_malformed_fields_are_named(tmp_path):
    path = str(tmp_path / "f.json")
    with open(path, "w") as fh:
        json.dump({"kind": "dqta", "h": 1, "k": 1, "l": 1}, fh)
    with pytest.raises(ValueError, match="matrix"):
        load_record(path)
    with open(path, "w") as fh:
        json.dump({"kind": "dqta", "h": 1, "k": 1, "l": 1,
                   "matrix": [[[1.0, 0.0, 0.0]]]}, fh)
    with pytest.raises(ValueError, match=r"entry \(0,0\)"):
        load_record(path)
    with open(path, "w") as fh:
        json.dump({"kind": "qta", "h": 1, "k": 2, "l": 2,
                   "matrix": [[[1.0, 0.0]]]}, fh)
    with pytest.raises(ValueError, match="'l' is not allowed"):
        load_record(path)


def test_qta_record_with_wrong_matrix_shape(tmp_path):
    path = str(tmp_path / "q.json")
    with open(path, "w") as fh:
        json.dump({"kind": "qta", "h": 1, "k": 2,
                   "matrix": [[[1.0, 0.0]], [[0.0, 0.0]]]}, fh)
    with pytest.raises(ValueError, match="row 0"):
        load_record(path)


def test_label_length_is_validated(tmp_path):
    path = str(tmp_path / "t.json")
    with open(path, "w") as fh:
        json.dump({"kind": "dqta", "h": 1, "k": 1, "l": 1,
                   "matrix": [[[1.0, 0.0]]],
                   "labels": {"input": ["a", "b"], "output": ["c"]}}, fh)
    with pytest.raises(ValueError, match="input labels"):
        load_record(path)


def test_shipped_examples_round_trip(tmp_path):
    files = sorted(glob.glob(os.path.join(DATA_DIR, "*.json")))
    assert files
    for src in files:
        record = load_record(src)
        value = parse_automaton(src)
        dest = str(tmp_path / os.path.basename(src))
        write_automaton(value, dest, record.labels)
        again = load_record(dest)
        assert np.array_equal(again.matrix, record.matrix)
        assert again.labels == record.labels
        assert (again.kind, again.h, again.k, again.l) == (
            record.kind, record.h, record.k, record.l)


# -------------------------------------------------------------------- cells

def test_cell_dimensions():
    cell = build_cell(2, 3)
    assert (cell.h, cell.k, cell.l) == (8, 4, 4)
    assert unitary_defect(cell.tau) == 0.0
    assert op_distance(cell.tau, kron(identity(8), sum_swap(2, 2))) == 0.0


def test_cell_labels_layout():
    assert cell_labels(2) == ("(L,1)", "(L,2)", "(R,1)", "(R,2)")


def test_empty_rule_table_gives_identity():
    cell = build_cell(2, 1, [])
    assert op_distance(cell.tau, identity(8)) == 0.0


def test_rule_table_permutation():
    # swap the two directions for state 1 only, symbol 0 only
    rule = [[["L", 1, 0], ["R", 1, 0]], [["R", 1, 0], ["L", 1, 0]]]
    cell = build_cell(2, 1, rule)
    mat = cell.tau.mat.real
    assert mat[2, 0] == 1.0 and mat[0, 2] == 1.0
    assert mat[1, 1] == 1.0
    assert unitary_defect(cell.tau) == 0.0


def test_non_bijective_rule_is_rejected():
    with pytest.raises(ValueError, match="bijection"):
        build_cell(2, 1, [[["L", 1, 0], ["R", 1, 0]]])
    with pytest.raises(ValueError, match="twice"):
        build_cell(2, 1, [[["L", 1, 0], ["R", 1, 0]],
                          [["L", 1, 0], ["R", 2, 0]]])


def test_rule_fields_are_validated():
    with pytest.raises(ValueError, match="direction"):
        build_cell(2, 1, [[["X", 1, 0], ["R", 1, 0]]])
    with pytest.raises(ValueError, match="state"):
        build_cell(2, 1, [[["L", 3, 0], ["R", 1, 0]]])
    with pytest.raises(ValueError, match="symbol"):
        build_cell(2, 1, [[["L", 1, 5], ["R", 1, 0]]])


def test_explicit_matrix_rule():
    tau = kron(identity(2), sum_swap(1, 1))
    cell = build_cell(1, 1, tau)
    assert op_distance(cell.tau, tau) == 0.0


# ------------------------------------------------------------------- chains

def test_chain_of_one_is_the_cell():
    cell = build_cell(2, 1)
    seg = chain_cells(cell, 1)
    assert op_distance(seg.tau, cell.tau) == 0.0


def test_chain_dimensions_and_isometry():
    cell = build_cell(2, 1)
    seg = chain_cells(cell, 3)
    assert (seg.h, seg.k, seg.l) == (8, 4, 4)
    assert isometry_defect(seg.tau) <= 1e-8


def test_chain_of_pass_through_cells_is_pass_through():
    # the internal geometric series collapses: one application carries the
    # control across the whole segment
    cell = build_cell(2, 1)
    seg = chain_cells(cell, 3)
    assert op_distance(seg.tau, kron(identity(8), sum_swap(2, 2))) <= 1e-12


def test_chain_rejects_odd_interfaces():
    bad = rand_dqta(1, 3, 3, 0)
    with pytest.raises(ValueError, match="halves"):
        chain_cells(bad, 2)


def test_mirror_agrees_on_symmetric_cells_and_differs_on_chiral():
    sym = build_cell(2, 1)
    assert op_distance(chain_cells(sym, 2).tau,
                       chain_cells(sym, 2, mirror=True).tau) <= 1e-12
    chiral = build_cell(1, 1, [[["L", 1, 0], ["R", 1, 1]],
                               [["R", 1, 1], ["L", 1, 0]]])
    plain = chain_cells(chiral, 2)
    flipped = chain_cells(chiral, 2, mirror=True)
    assert op_distance(plain.tau, flipped.tau) > 1e-6


def test_ring_closes_every_interface():
    cell = build_cell(2, 1)
    ring = chain_cells(cell, 2, ring=True)
    assert (ring.h, ring.k, ring.l) == (4, 0, 0)


# --------------------------------------------------------------- simulation

def test_simulation_echoes_initial_on_zero_steps():
    cell = build_cell(2, 1)
    trace = simulate(cell, (1, 0), 0)
    assert trace.steps == 0
    assert trace.masses == ((0.0, 1.0, 0.0, 0.0),)
    assert trace.total_norm == (1.0,)


def test_simulation_moves_the_control_across():
    cell = build_cell(2, 1)
    trace = simulate(cell, (0, 0), 3)
    # pass-through rule: (L,1) and (R,1) alternate
    assert trace.masses[0][0] == 1.0
    assert trace.masses[1][2] == 1.0
    assert trace.masses[2][0] == 1.0
    assert all(abs(n - 1.0) <= 1e-9 for n in trace.total_norm)


def test_simulation_norm_is_conserved_on_shipped_examples():
    for src in sorted(glob.glob(os.path.join(DATA_DIR, "*.json"))):
        value = parse_automaton(src)
        if isinstance(value, Dqta) and value.k != value.l:
            continue
        trace = simulate(value, (0, 0), 100)
        assert all(abs(n - 1.0) <= 1e-9 for n in trace.total_norm)


def test_simulation_accepts_state_vectors_and_checks_norm():
    cell = build_cell(2, 1)
    v = np.zeros(8)
    v[0] = v[4] = 1.0 / np.sqrt(2.0)
    trace = simulate(cell, v, 1)
    assert abs(trace.total_norm[1] - 1.0) <= 1e-9
    with pytest.raises(ValueError, match="norm"):
        simulate(cell, 2.0 * v, 1)
    with pytest.raises(ValueError, match="length"):
        simulate(cell, np.ones(3), 1)


def test_simulation_rejects_rectangular_automata():
    with pytest.raises(ValueError, match="square"):
        simulate(rand_dqta(1, 2, 3, 0), (0, 0), 1)


# ----------------------------------------------------------------- commands

def test_chaining_commutes_with_bidirectionalization():
    # assembling two cells and then flattening agrees with flattening one
    # cell and composing the flattened morphisms
    for cell in (build_cell(2, 1),
                 build_cell(2, 1, random_isometry(8, 8, 99))):
        via_chain = name_of(as_int0(chain_cells(cell, 2), 2))
        f = as_int0(cell, 2)
        via_int0 = name_of(int_compose(f, f))
        assert (via_chain.h, via_chain.n) == (via_int0.h, via_int0.n) == (4, 4)
        assert op_distance(via_chain.tau, via_int0.tau) <= 1e-7


def test_usage_errors_exit_2(capsys):
    assert run_command([]) == 2
    assert run_command(["frobnicate"]) == 2
    assert run_command(["feedback", "x.json"]) == 2
    capsys.readouterr()


def test_validation_failure_exits_1(tmp_path, capsys):
    path = str(tmp_path / "bad.json")
    with open(path, "w") as fh:
        json.dump({"kind": "dqta", "h": 1, "k": 1, "l": 1,
                   "matrix": [[[0.5, 0.0]]]}, fh)
    assert run_command(["validate", path]) == 1
    assert "defect" in capsys.readouterr().err


def test_validate_reports_shape_and_defect(capsys):
    src = os.path.join(DATA_DIR, "cell_2s1b.json")
    assert run_command(["validate", src]) == 0
    out = capsys.readouterr().out
    assert "dqta h=2 k=4 l=4" in out


def test_compose_tensor_feedback_commands(tmp_path, capsys):
    cell = os.path.join(DATA_DIR, "cell_2s1b.json")
    composed = str(tmp_path / "composed.json")
    assert run_command(["compose", cell, cell, "-o", composed]) == 0
    value = parse_automaton(composed)
    assert (value.h, value.k, value.l) == (4, 4, 4)
    assert load_record(composed).labels == {
        "input": cell_labels(2), "output": cell_labels(2)}

    tensored = str(tmp_path / "tensored.json")
    assert run_command(["tensor", cell, cell, "-o", tensored]) == 0
    value = parse_automaton(tensored)
    assert (value.h, value.k, value.l) == (4, 8, 8)

    fed = str(tmp_path / "fed.json")
    assert run_command(["feedback", cell, "--u", "1", "-o", fed]) == 0
    value = parse_automaton(fed)
    assert (value.h, value.k, value.l) == (2, 3, 3)
    assert load_record(fed).labels == {
        "input": ("(L,2)", "(R,1)", "(R,2)"),
        "output": ("(L,2)", "(R,1)", "(R,2)")}
    capsys.readouterr()


def test_feedback_yanking_via_files(tmp_path, capsys):
    swap = os.path.join(DATA_DIR, "swap.json")
    out = str(tmp_path / "ident.json")
    assert run_command(["feedback", swap, "--u", "1", "-o", out]) == 0
    value = parse_automaton(out)
    assert (value.h, value.k, value.l) == (1, 1, 1)
    assert op_distance(value.tau, identity(1)) == 0.0
    capsys.readouterr()


def test_bidir_routes(tmp_path, capsys):
    cell = os.path.join(DATA_DIR, "cell_2s1b.json")
    named = str(tmp_path / "named.json")
    assert run_command(["bidir", cell, "-o", named]) == 0
    assert "name route" in capsys.readouterr().out
    q = parse_automaton(named)
    assert isinstance(q, Qta)
    assert q.tau.mat.shape == (8, 8)
    assert np.array_equal(q.tau.mat, parse_automaton(cell).tau.mat)

    functored = str(tmp_path / "functored.json")
    assert run_command(["bidir", cell, "--route", "functor",
                        "-o", functored]) == 0
    qf = parse_automaton(functored)
    assert (qf.h, qf.n) == (4, 8)
    assert op_distance(qf.tau, bidirectionalize(parse_automaton(cell)).tau) == 0.0
    capsys.readouterr()


def test_bidir_name_route_needs_labels(tmp_path, capsys):
    plain = str(tmp_path / "plain.json")
    write_automaton(unit_automata(2, 2)[0], plain)
    assert run_command(["bidir", plain, "--route", "name", "-o",
                        str(tmp_path / "x.json")]) == 1
    assert "labels" in capsys.readouterr().err
    # auto falls back to the functor route
    out = str(tmp_path / "y.json")
    assert run_command(["bidir", plain, "-o", out]) == 0
    assert "functor route" in capsys.readouterr().out


def test_cell_and_chain_commands(tmp_path, capsys):
    cell = str(tmp_path / "cell.json")
    assert run_command(["cell", "--states", "2", "--bits", "1",
                        "-o", cell]) == 0
    seg = str(tmp_path / "seg.json")
    assert run_command(["chain", cell, "--n", "2", "-o", seg]) == 0
    value = parse_automaton(seg)
    assert (value.h, value.k, value.l) == (4, 4, 4)
    assert load_record(seg).labels == {
        "input": cell_labels(2), "output": cell_labels(2)}

    ring = str(tmp_path / "ring.json")
    assert run_command(["chain", cell, "--n", "2", "--ring", "-o", ring]) == 0
    assert parse_automaton(ring).k == 0
    capsys.readouterr()


def test_chain_command_requires_labels(tmp_path, capsys):
    plain = str(tmp_path / "plain.json")
    write_automaton(build_cell(2, 1), plain)
    assert run_command(["chain", plain, "--n", "2",
                        "-o", str(tmp_path / "x.json")]) == 1
    assert "label" in capsys.readouterr().err


def test_cell_command_with_rule_file(tmp_path, capsys):
    rule_path = str(tmp_path / "rule.json")
    with open(rule_path, "w") as fh:
        json.dump([[["L", 1, 0], ["R", 1, 0]], [["R", 1, 0], ["L", 1, 0]]], fh)
    out = str(tmp_path / "cell.json")
    assert run_command(["cell", "--states", "1", "--bits", "0",
                        "--rule", rule_path, "-o", out]) == 0
    value = parse_automaton(out)
    assert op_distance(value.tau, sum_swap(1, 1)) == 0.0
    bad_rule = str(tmp_path / "bad.json")
    with open(bad_rule, "w") as fh:
        json.dump([[["L", 1, 0], ["L", 1, 0]], [["R", 1, 0], ["L", 1, 0]]], fh)
    assert run_command(["cell", "--states", "1", "--bits", "0",
                        "--rule", bad_rule, "-o", out]) == 1
    capsys.readouterr()


def test_simulate_command_prints_json_steps(capsys):
    cell = os.path.join(DATA_DIR, "cell_2s1b.json")
    assert run_command(["simulate", cell, "--steps", "2"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 3
    for line in lines:
        record = json.loads(line)
        assert abs(record["total_norm"] - 1.0) <= 1e-9


def test_axioms_command(capsys):
    assert run_command(["axioms", "--instances", "0"]) == 0
    capsys.readouterr()
    assert run_command(["axioms", "--seed", "3", "--instances", "5",
                        "--laws", "tensor-compat",
                        "conway-counterexample"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 2
    first = json.loads(lines[0])
    assert first["law"] == "feedback-tensor-compat"
    assert first["pass"] is True
    assert json.loads(lines[1])["pass"] is False

"""End-to-end verification suite.

Each test is one acceptance criterion, checked exactly or over the stated
sample/sweep, with a hard wall-clock bound.  Run with ``pytest -s`` to see
one PASS line per criterion.
"""

import itertools
import random
import time

from corec.core import (
    BOTTOM,
    EquationSystem,
    FlatTerm,
    Op,
    Param,
    ParamLeaf,
    Signature,
    Var,
    flat,
)
from corec.checker import (
    anchor_correspondence,
    check_rewrite_invariance,
    is_cia,
    is_corecursive,
    unary_algebra,
    witness_non_cia,
)
from corec.presentation import (
    Presentation,
    is_reduced,
    quotient_classes,
    reduce_presentation,
)
from corec.rtree import (
    INFINITE,
    Lasso,
    LeafStep,
    OpStep,
    RationalTree,
    bisim_equal,
    count_param_leaves,
    cut,
    cut_equal,
    graft,
    has_finite_param_leaves,
)
from corec.solver import (
    FinitePart,
    InfinitePart,
    compose_systems,
    solve,
    solve_decomposed,
)

SIG_BIN = Signature((("sigma", 2),))


def _report(number: int, name: str, started: float, bound: float, detail: str) -> None:
    elapsed = time.perf_counter() - started
    print(f"criterion {number} ({name}): PASS in {elapsed:.3f}s: {detail}")
    assert elapsed < bound, f"criterion {number} exceeded its {bound}s budget"


def _random_unary_system(rng: random.Random, max_letters=3, max_vars=8):
    letters = ["a", "b", "c"][: rng.randint(1, max_letters)]
    sig = Signature(tuple((w, 1) for w in letters))
    names = [f"x{i}" for i in range(rng.randint(1, max_vars))]
    rhs = {}
    for x in names:
        if rng.random() < 0.3:
            rhs[x] = Param("y")
        else:
            rhs[x] = FlatTerm(rng.choice(letters), (Var(rng.choice(names)),))
    return EquationSystem(sig, tuple(names), ("y",), rhs)


def test_criterion_1_spine_reproduction():
    started = time.perf_counter()
    system = EquationSystem(
        SIG_BIN,
        ("x1", "x2"),
        ("y",),
        {
            "x1": FlatTerm("sigma", (Var("x1"), Var("x2"))),
            "x2": Param("y"),
        },
    )
    solution = solve(system)
    hand_coded = RationalTree(SIG_BIN, (OpStep("sigma", (0, 1)), LeafStep("y")), 0)
    assert bisim_equal(solution["x1"], hand_coded)
    assert not has_finite_param_leaves(solution["x1"])
    bot = ParamLeaf(BOTTOM)
    expected_cut = Op(
        "sigma",
        (Op("sigma", (Op("sigma", (bot, bot)), ParamLeaf("y"))), ParamLeaf("y")),
    )
    assert cut(solution["x1"], 3) == expected_cut
    _report(1, "spine reproduction", started, 0.010, "exact tree, cut, and membership")


def test_criterion_2_decomposition_coherence():
    started = time.perf_counter()
    rng = random.Random(2024)
    failures = 0
    for _ in range(500):
        system = _random_unary_system(rng)
        generic = solve(system)
        decomposed = solve_decomposed(system)
        for x in system.variables:
            tree = decomposed[x].to_tree(system.signature)
            if not bisim_equal(tree, generic[x]):
                failures += 1
            leaves = count_param_leaves(generic[x])
            if isinstance(decomposed[x], FinitePart):
                if leaves != 1:
                    failures += 1
            else:
                if leaves != 0:
                    failures += 1
    assert failures == 0
    _report(2, "decomposition coherence", started, 5.0, "500 random unary systems")


def test_criterion_3_corecursive_implies_cia():
    started = time.perf_counter()
    checked = holding = 0
    for letters in (("a",), ("a", "b")):
        sig = Signature(tuple((w, 1) for w in letters))
        for size in (1, 2, 3):
            carrier = tuple(range(size))
            for tables in itertools.product(
                itertools.product(carrier, repeat=size), repeat=len(letters)
            ):
                actions = {
                    w: dict(zip(carrier, tables[i])) for i, w in enumerate(letters)
                }
                algebra = unary_algebra(sig, carrier, actions)
                checked += 1
                if is_corecursive(algebra, 3).holds:
                    holding += 1
                    assert is_cia(algebra, 3).holds, (letters, size, tables)
    assert checked == 778
    _report(
        3,
        "corecursive implies completely iterative",
        started,
        60.0,
        f"{checked} algebras swept, {holding} hold, 0 exceptions",
    )


def test_criterion_4_anchor_solution_bijection():
    started = time.perf_counter()
    pairs = 0
    for letters in (("a",), ("a", "b")):
        sig = Signature(tuple((w, 1) for w in letters))
        for size in (1, 2):
            carrier = tuple(range(size))
            params = tuple(f"p{c}" for c in carrier)
            valuation = {f"p{c}": c for c in carrier}
            for tables in itertools.product(
                itertools.product(carrier, repeat=size), repeat=len(letters)
            ):
                actions = {
                    w: dict(zip(carrier, tables[i])) for i, w in enumerate(letters)
                }
                algebra = unary_algebra(sig, carrier, actions)
                for m in (1, 2, 3):
                    names = tuple(f"x{i}" for i in range(m))
                    options = [("op", w, j) for w in letters for j in range(m)]
                    options += [("param", p, None) for p in params]
                    for combo in itertools.product(options, repeat=m):
                        rhs = {}
                        for i, (kind, a, b) in enumerate(combo):
                            if kind == "op":
                                rhs[names[i]] = FlatTerm(a, (Var(names[b]),))
                            else:
                                rhs[names[i]] = Param(a)
                        system = EquationSystem(sig, names, params, rhs)
                        report = anchor_correspondence(algebra, system, valuation)
                        assert report.bijective, (actions, rhs)
                        assert report.anchor_count == report.solution_count
                        pairs += 1
    _report(
        4,
        "anchor/solution bijection",
        started,
        60.0,
        f"{pairs} system/algebra pairs, all bijective",
    )


def test_criterion_5_spine_witness():
    started = time.perf_counter()
    for arity in (2, 3):
        sig = Signature(((f"alpha", arity),))
        witness = witness_non_cia(sig, 20)
        assert witness.leaf_count == INFINITE
        assert witness.leaf_at_every_level
        assert witness.levels_checked == 20
        assert witness.ok
    _report(5, "wide-symbol witness", started, 1.0, "arity 2 and 3, 20 levels each")


def test_criterion_6_reduction():
    started = time.perf_counter()
    padded = Presentation(
        Signature((("u", 2), ("s", 1), ("sigma", 2))),
        (
            (flat("u", "p", "q"), flat("u", "q", "p")),
            (flat("u", "p", "p"), flat("s", "p")),
            (flat("sigma", "p", "q"), flat("s", "p")),
        ),
    )
    reduced, translation = reduce_presentation(padded)
    ok, violation = is_reduced(reduced)
    assert ok, violation
    counts = []
    for size in (0, 1, 2, 3):
        atoms = list(range(size))
        before = len(quotient_classes(padded, atoms))
        after = len(quotient_classes(reduced, atoms))
        assert before == after, (size, before, after)
        counts.append(before)
    assert translation["sigma"] == ("s", (0,))
    _report(6, "presentation reduction", started, 5.0, f"class counts {counts}")


def _random_tree(rng: random.Random, max_states=10) -> RationalTree:
    sig = Signature((("sigma", 2), ("a", 1)))
    n = rng.randint(1, max_states)
    steps = []
    for _ in range(n):
        kind = rng.random()
        if kind < 0.3:
            steps.append(LeafStep(rng.choice(["y", "z"])))
        elif kind < 0.6:
            steps.append(OpStep("a", (rng.randrange(n),)))
        else:
            steps.append(OpStep("sigma", (rng.randrange(n), rng.randrange(n))))
    return RationalTree(sig, tuple(steps), 0)


def _bisimilar_variant(rng: random.Random, tree: RationalTree) -> RationalTree:
    """Duplicate every state and rewire children arbitrarily between copies."""
    n = len(tree.steps)
    steps = []
    for copy in (0, 1):
        for st in tree.steps:
            if isinstance(st, LeafStep):
                steps.append(st)
            else:
                steps.append(
                    OpStep(
                        st.symbol,
                        tuple(c + rng.choice((0, n)) for c in st.children),
                    )
                )
    return RationalTree(tree.signature, tuple(steps), tree.root)


def test_criterion_7_bisimulation_adequacy():
    started = time.perf_counter()
    rng = random.Random(7_000)
    disagreements = 0
    for trial in range(500):
        left = _random_tree(rng)
        if trial % 2 == 0:
            right = _bisimilar_variant(rng, left)
        else:
            right = _random_tree(rng)
        k = len(left) * len(right)
        by_cut = cut_equal(left, right, k)
        if bisim_equal(left, right) != by_cut:
            disagreements += 1
        if by_cut != cut_equal(left, right, k + 5):
            disagreements += 1
    assert disagreements == 0
    _report(7, "bisimulation adequacy", started, 5.0, "500 pairs, cut oracle agrees")


def test_criterion_8_solver_axioms():
    started = time.perf_counter()
    sig = Signature((("a", 1),))
    rng = random.Random(88)

    for _ in range(200):  # functoriality over random system morphisms
        m = rng.randint(1, 4)
        targets = [f"t{i}" for i in range(m)]
        t_rhs = {}
        for t in targets:
            if rng.random() < 0.3:
                t_rhs[t] = Param("y")
            else:
                t_rhs[t] = FlatTerm("a", (Var(rng.choice(targets)),))
        target_system = EquationSystem(sig, tuple(targets), ("y",), t_rhs)
        n = rng.randint(m, 5)
        sources = [f"s{i}" for i in range(n)]
        h = {s: (targets[i] if i < m else rng.choice(targets)) for i, s in enumerate(sources)}
        fibers = {t: [s for s in sources if h[s] == t] for t in targets}
        s_rhs = {}
        for s in sources:
            r = t_rhs[h[s]]
            if isinstance(r, Param):
                s_rhs[s] = r
            else:
                s_rhs[s] = FlatTerm(r.head, (Var(rng.choice(fibers[r.args[0].name])),))
        source_system = EquationSystem(sig, tuple(sources), ("y",), s_rhs)
        source_sol = solve(source_system)
        target_sol = solve(target_system)
        for s in sources:
            assert bisim_equal(source_sol[s], target_sol[h[s]])

    for _ in range(100):  # compositionality of chained systems
        xs = [f"x{i}" for i in range(rng.randint(1, 3))]
        ys = [f"y{i}" for i in range(rng.randint(1, 2))]
        e_rhs = {
            x: (
                Param(rng.choice(ys))
                if rng.random() < 0.4
                else FlatTerm("a", (Var(rng.choice(xs)),))
            )
            for x in xs
        }
        f_rhs = {
            y: (
                Param("z0")
                if rng.random() < 0.4
                else FlatTerm("a", (Var(rng.choice(ys)),))
            )
            for y in ys
        }
        e = EquationSystem(sig, tuple(xs), tuple(ys), e_rhs)
        f = EquationSystem(sig, tuple(ys), ("z0",), f_rhs)
        composed_sol = solve(compose_systems(e, f))
        e_sol, f_sol = solve(e), solve(f)
        for x in xs:
            grafted = graft(e_sol[x], {y: f_sol[y] for y in ys})
            assert bisim_equal(composed_sol[x], grafted)

    _report(8, "solver axioms", started, 10.0, "200 morphisms + 100 compositions")


def test_criterion_9_single_letter_decomposition():
    started = time.perf_counter()
    sig = Signature((("step", 1),))
    the_stream = InfinitePart(Lasso((), ("step",)))
    systems = 0
    for m in (1, 2, 3, 4):
        names = tuple(f"x{i}" for i in range(m))
        options = [("op", j) for j in range(m)] + [("param", None)]
        for combo in itertools.product(options, repeat=m):
            rhs = {}
            for i, (kind, j) in enumerate(combo):
                if kind == "op":
                    rhs[names[i]] = FlatTerm("step", (Var(names[j]),))
                else:
                    rhs[names[i]] = Param("y")
            system = EquationSystem(sig, names, ("y",), rhs)
            decomposed = solve_decomposed(system)
            for x in names:
                value = decomposed[x]
                if isinstance(value, FinitePart):
                    assert value.leaf == "y"
                    assert set(value.word) <= {"step"}
                else:
                    assert value == the_stream
            systems += 1
    _report(
        9,
        "single-letter decomposition",
        started,
        1.0,
        f"{systems} exhaustive systems: length-tagged leaf or the unique stream",
    )


def test_criterion_10_rewrite_square():
    started = time.perf_counter()
    sig = Signature((("u", 2), ("s", 1)))
    commutativity = Presentation(sig, ((flat("u", "p", "q"), flat("u", "q", "p")),))
    rng = random.Random(1010)
    distinct = 0
    for _ in range(50):
        n = rng.randint(1, 4)
        names = [f"x{i}" for i in range(n)]
        params = ["y1", "y2"]
        rhs = {}
        for x in names:
            pool = names + params

            def atom():
                a = rng.choice(pool)
                return Var(a) if a in names else Param(a)

            if rng.random() < 0.7:
                rhs[x] = FlatTerm("u", (atom(), atom()))
            else:
                rhs[x] = FlatTerm("s", (atom(),))
        system = EquationSystem(sig, tuple(names), tuple(params), rhs)
        verdict = check_rewrite_invariance(commutativity, system, 8)
        if verdict.is_distinct:
            distinct += 1
        assert verdict.is_equal, verdict
    assert distinct == 0
    _report(10, "rewrite invariance", started, 10.0, "50 systems equal at depth 8")

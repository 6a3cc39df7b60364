"""Verification drivers: machine-checkable pass/fail reports for every claim
the engine can decide about the example families.

Every report is reproducible bit-exactly from (claim_id, parameters, seed):
sampling uses a seeded generator, all comparisons are exact equalities, and
pass for an equality claim means exact equality.  ``elapsed`` is measured but
excluded from deterministic serializations.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass
from importlib import resources

from .diffeos import FormalDiffeo, evaluate_word, word_depth
from .fields import VectorField, is_first_integral, nilpotency_degree_a
from .laurent import LaurentPoly
from .lie import (
    NON_TERMINATING,
    bracket_closure,
    central_series,
    derived_series,
    kappa_sequence,
    nilpotency_class,
    series_terminates,
    soluble_length,
)
from .families import (
    build_nilpotent_example,
    build_chain_algebra,
    chain_composition_value,
    chain_exponent,
    default_solvable_order,
    expected_a_value,
    expected_nilpotency_class,
    random_intro_member,
)
from .parsing import format_diffeo, format_word, parse_diffeo, parse_word


@dataclass
class VerificationReport:
    claim_id: str
    parameters: dict
    status: str  # "pass" | "fail" | "unstable"
    witness: str | None = None
    elapsed: float = 0.0
    notes: tuple[str, ...] = ()

    def as_dict(self, include_elapsed: bool = False) -> dict:
        return {
            "claim_id": self.claim_id,
            "parameters": self.parameters,
            "status": self.status,
            "witness": self.witness,
            "elapsed": round(self.elapsed, 6) if include_elapsed else None,
            "notes": list(self.notes),
        }

    @property
    def ok(self) -> bool:
        return self.status == "pass"


def reports_to_json(reports: list[VerificationReport], include_elapsed: bool = False) -> str:
    """Canonical JSON: claims sorted by claim_id, keys sorted, no timing
    unless asked (timing would break byte-identity across runs)."""
    payload = {
        "schema": "germcalc-report/1",
        "claims": [
            r.as_dict(include_elapsed) for r in sorted(reports, key=lambda r: r.claim_id)
        ],
    }
    return json.dumps(payload, sort_keys=True, indent=2)


def reports_to_text(reports: list[VerificationReport]) -> str:
    lines = []
    for r in sorted(reports, key=lambda r: r.claim_id):
        lines.append(f"[{r.status.upper():8s}] {r.claim_id}  ({r.elapsed:.2f}s)")
        for key, value in sorted(r.parameters.items()):
            lines.append(f"    {key} = {value}")
        if r.witness:
            lines.append(f"    witness: {r.witness}")
        for note in r.notes:
            lines.append(f"    note: {note}")
    return "\n".join(lines)


class _Claim:
    """Collects failures for one claim and times it."""

    def __init__(self, claim_id: str, parameters: dict):
        self.claim_id = claim_id
        self.parameters = parameters
        self.failures: list[str] = []
        self.notes: list[str] = []
        self.witness: str | None = None
        self.unstable = False
        self.t0 = time.monotonic()

    def check(self, ok: bool, what: str):
        if not ok:
            self.failures.append(what)

    def report(self) -> VerificationReport:
        elapsed = time.monotonic() - self.t0
        if self.failures:
            status = "unstable" if self.unstable else "fail"
            witness = "; ".join(self.failures)
            if self.witness:
                witness += f" | {self.witness}"
            return VerificationReport(
                self.claim_id, self.parameters, status, witness, elapsed, tuple(self.notes)
            )
        return VerificationReport(
            self.claim_id, self.parameters, "pass", self.witness, elapsed, tuple(self.notes)
        )


# -- the planar family with prescribed nilpotency class --------------------------


def verify_intro_nilpotency(
    k_param: int, jet_order: int, sample_count: int = 8, seed: int = 0
) -> VerificationReport:
    """Sampled verification that the planar family has nilpotency class
    k_param - 1 with the expected shape at every intermediate depth.

    Checks, on seeded random members: every depth-j iterated commutator for
    1 <= j <= k_param-2 has the form (x + Q(y), y) with Q supported in
    degrees j+2 .. k_param; some depth-(k_param-2) commutator is nontrivial;
    every depth-(k_param-1) commutator is the identity jet.
    """
    if jet_order < k_param + 2:
        raise ValueError("jet order must be at least k_param + 2")
    claim = _Claim(
        f"intro-nilpotency-k{k_param}",
        {"k_param": k_param, "jet_order": jet_order, "samples": sample_count, "seed": seed},
    )
    claim.notes.append(
        "commutator first components are read as polynomials in the second "
        "variable alone; the two-variable family admits no other dependence"
    )
    rng = random.Random(seed)
    ident = FormalDiffeo.identity(2, jet_order)
    x1 = LaurentPoly.variable(2, 1)
    x2 = LaurentPoly.variable(2, 2)
    witness = None
    for _ in range(sample_count):
        els = [random_intro_member(rng, k_param, jet_order) for _ in range(k_param)]
        c = els[0]
        if k_param == 2 and witness is None and c != ident:
            witness = c  # abelian family: class 1 is witnessed by any member
        for j in range(1, k_param):
            c = els[j].commutator(c)
            if j <= k_param - 2:
                claim.check(c.components[1] == x2, f"depth-{j} second component moved")
                q = c.components[0] - x1
                for exps in q.terms:
                    claim.check(exps[0] == 0, f"depth-{j} first component depends on x1")
                    claim.check(
                        exps[1] >= j + 2,
                        f"depth-{j} translation has a term of degree {exps[1]} < {j + 2}",
                    )
                if j == k_param - 2 and witness is None and not q.is_zero():
                    witness = c
            else:
                claim.check(c == ident, f"depth-{j} commutator is not the identity")
    if witness is None:
        # all sampled deepest commutators vanished: cannot certify the class
        claim.unstable = True
        claim.failures.append(f"no nontrivial depth-{k_param - 2} witness in the sample")
    else:
        claim.witness = format_diffeo(witness)
    return claim.report()


# -- the solvable chain -----------------------------------------------------------


def _solvable_lengths(n: int, order: int):
    g0 = build_chain_algebra(n, 0, order)
    levels = derived_series(g0)
    if not series_terminates(levels):
        return None, None, levels
    return len(levels) - 1, kappa_sequence(g0), levels


def verify_solvable_family(n: int, jet_order: int | None = None) -> VerificationReport:
    """Derived-series verification for the chain algebra in jet mode.

    Checks: every derived term sits inside the matching chain space; the
    monomial-scaled copies of the chain spaces sit inside the derived terms
    (at the exponent schedule 2^j + 2^(j-2) - 2); the soluble length is
    exactly 2n; the generic-rank sequence drops strictly every two steps.
    All reported values must be reproduced at jet order + 1, otherwise the
    claim is unstable rather than decided.
    """
    if jet_order is None:
        jet_order = default_solvable_order(n)
    claim = _Claim(f"solvable-chain-n{n}", {"n": n, "jet_order": jet_order})
    length, kappa, levels = _solvable_lengths(n, jet_order)
    if length is None:
        claim.unstable = True
        claim.failures.append("derived series does not terminate at this jet order")
        return claim.report()
    claim.check(length == 2 * n, f"soluble length {length} != {2 * n}")
    claim.check(kappa.strict_two_step_drop(), f"kappa {kappa.values} lacks the strict two-step drop")
    # containment in the chain spaces
    for j, level in enumerate(levels):
        if j > 2 * n:
            break
        Gj = build_chain_algebra(n, j, jet_order)
        claim.check(
            Gj.contains_span(level) if Gj.basis else level.is_zero(),
            f"derived term {j} leaves the chain space {j}",
        )
    # monomial-scaled copies downstairs
    xn = LaurentPoly.monomial(n, {n: 1})
    for j in range(2, min(2 * n, len(levels) - 1) + 1):
        c = chain_exponent(j)
        if c >= jet_order:
            continue
        mono = xn ** c
        Gj = build_chain_algebra(n, j, jet_order)
        checked = 0
        for X in Gj.basis:
            scaled = VectorField([mono * co for co in X.coeffs]).truncate(jet_order)
            if scaled.is_zero():
                continue
            checked += 1
            claim.check(
                levels[j].contains_field(scaled),
                f"x{n}^{c} copy of chain space {j} escapes derived term {j}",
            )
        claim.notes.append(f"scaled-copy check at depth {j}: {checked} generators")
    # stability under jet order + 1
    length2, kappa2, _ = _solvable_lengths(n, jet_order + 1)
    if length2 != length or (kappa2 and kappa2.values != kappa.values):
        claim.unstable = True
        claim.failures.append(
            f"unstable at jet order {jet_order}: length {length}->{length2}, "
            f"kappa {kappa.values}->{kappa2.values if kappa2 else None}"
        )
    claim.parameters["soluble_length"] = length
    claim.parameters["kappa"] = list(kappa.values)
    return claim.report()


# -- the nilpotent family -----------------------------------------------------------


def verify_nilpotent_example(n: int) -> VerificationReport:
    """Exact verification of the commuting meromorphic family in dimension n.

    Covers: the six commutation/first-integral identities of the family; the
    a-values 3*2^(k-1) - 2; the maximal-length chain composite landing in a
    nonzero constant; soluble length n and nilpotency class 3*2^(n-2) - 1 of
    the generated algebra (exact mode); and the coefficient-wise
    first-integral containment of the derived terms.
    """
    claim = _Claim(f"nilpotent-family-n{n}", {"n": n})
    us, xs, zs = build_nilpotent_example(n)
    # (1) the X family commutes
    for a in range(n):
        for b in range(a + 1, n):
            claim.check(
                xs[a].bracket(xs[b]).is_zero(), f"[X{a + 1}, X{b + 1}] != 0"
            )
    # (2) the last field sends u_(n-1) to -1, the others kill it
    minus_one = LaurentPoly.constant(n, -1)
    claim.check(xs[n - 1].apply(us[n - 2]) == minus_one, "X_n(u_(n-1)) != -1")
    for j in range(n - 1):
        claim.check(xs[j].apply(us[n - 2]).is_zero(), f"X{j + 1}(u_(n-1)) != 0")
    for k in range(2, n):
        u = us[n - k - 1]
        X = xs[n - k]
        img = X.apply(u)
        # (3) only X_(n-k+1) moves u_(n-k)
        for j in range(1, n + 1):
            if j != n - k + 1:
                claim.check(xs[j - 1].apply(u).is_zero(), f"X{j}(u_(n-{k})) != 0")
        # (4) the image and its second application
        expected = LaurentPoly.monomial(n, {n - k + 1: -1}, -2) * us[n - k]
        claim.check(img == expected, f"X(u) has the wrong value at k={k}")
        claim.check(X.apply(img) == LaurentPoly.constant(n, 2), f"X^2(u) != 2 at k={k}")
        # (5) the image is killed by every other field
        for j in range(1, n + 1):
            if j != n - k + 1:
                claim.check(xs[j - 1].apply(img).is_zero(), f"X{j}(X(u)) != 0 at k={k}")
        # (6) the square identity
        claim.check(img * img == u * 4, f"(X(u))^2 != 4u at k={k}")
    # a-values and the chain composite
    for k in range(1, n):
        a = nilpotency_degree_a(us[n - k - 1], zs)
        claim.check(
            a == expected_a_value(n, k),
            f"a(u_(n-{k})) = {a}, expected {expected_a_value(n, k)}",
        )
        chain = chain_composition_value(n, k)
        claim.check(
            chain.is_constant() and not chain.is_zero(),
            f"chain composite at k={k} is not a nonzero constant",
        )
    # lengths of the generated algebra (exact mode)
    g = bracket_closure(zs, "exact")
    length = soluble_length(g)
    claim.check(length == n, f"soluble length {length} != {n}")
    cls = nilpotency_class(g)
    claim.check(
        cls == expected_nilpotency_class(n),
        f"nilpotency class {cls} != {expected_nilpotency_class(n)}",
    )
    claim.parameters["soluble_length"] = length if length is not NON_TERMINATING else "non-terminating"
    claim.parameters["nilpotency_class"] = cls if cls is not NON_TERMINATING else "non-terminating"
    # derived terms decompose as (first integral) * X_k with shrinking k
    _check_first_integral_structure(claim, n, xs, g)
    return claim.report()


def _check_first_integral_structure(claim: _Claim, n: int, xs, g):
    """Each derived term g^(j) must decompose over the X basis with
    coefficients vanishing past index n-j and coefficient k a first integral
    of X_1..X_k."""
    from .lie import BasisSplit, decompose_over_split
    from .ratfunc import apply_field_rational

    split = BasisSplit((), tuple(xs))
    levels = derived_series(g)
    for j, level in enumerate(levels):
        if j >= n or not level.basis:
            continue
        for Z in level.basis:
            _, coeffs = decompose_over_split(Z, split)
            for k, vk in enumerate(coeffs, start=1):
                if k > n - j:
                    claim.check(
                        vk.is_zero(),
                        f"derived term {j} has a component along X{k} > X{n - j}",
                    )
                elif not vk.is_zero():
                    if vk.is_laurent():
                        ok = is_first_integral(vk.as_laurent(), xs[:k])
                    else:
                        ok = all(
                            apply_field_rational(X, vk).is_zero() for X in xs[:k]
                        )
                    claim.check(
                        ok,
                        f"coefficient of X{k} in derived term {j} is not a first integral",
                    )


# -- group-level witnesses -----------------------------------------------------------


@dataclass(frozen=True)
class WitnessFixture:
    dim: int
    order: int
    depth: int
    generators: tuple[FormalDiffeo, ...]
    words: tuple[object, ...]


def load_witness_fixture(name: str) -> WitnessFixture:
    """Parse a witness fixture file (format documented in the fixture itself)."""
    text = resources.files("germcalc").joinpath(f"fixtures/{name}").read_text()
    dim = order = depth = None
    gen_texts: list[str] = []
    word_texts: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(" ")
        if key == "dim":
            dim = int(rest)
        elif key == "order":
            order = int(rest)
        elif key == "depth":
            depth = int(rest)
        elif key == "gen":
            gen_texts.append(rest.strip())
        elif key == "word":
            word_texts.append(rest.strip())
        else:
            raise ValueError(f"unknown fixture line {line!r}")
    if dim is None or order is None or depth is None:
        raise ValueError(f"fixture {name} is missing dim/order/depth")
    gens = tuple(parse_diffeo(t, dim, order) for t in gen_texts)
    words = tuple(parse_word(t) for t in word_texts)
    return WitnessFixture(dim, order, depth, gens, words)


def verify_group_length_witness(
    gens, depth: int, words, claim_id: str = "group-witness"
) -> VerificationReport:
    """Pass iff some word of commutator depth >= depth evaluates to a
    non-identity jet (a lower-bound certificate: soluble length >= depth+1).

    Also checks the unipotence of every evaluated depth >= 1 word: elements of
    the first derived group are tangent to the identity.
    """
    claim = _Claim(claim_id, {"depth": depth, "generators": len(gens), "words": len(words)})
    ident = FormalDiffeo.identity(gens[0].dim, gens[0].order)
    witness = None
    for word in words:
        d = word_depth(word)
        claim.check(d >= depth, f"word {format_word(word)} has depth {d} < {depth}")
        value = evaluate_word(word, gens)
        if d >= 1:
            claim.check(
                value.is_tangent_to_identity(),
                f"word {format_word(word)} does not evaluate tangent to the identity",
            )
        if value != ident and witness is None:
            witness = (word, value)
    if witness is None:
        claim.failures.append("no supplied word evaluated to a non-identity jet")
    else:
        claim.witness = f"{format_word(witness[0])} -> {format_diffeo(witness[1])}"
    return claim.report()


def verify_group_witness_fixture(name: str, claim_id: str) -> VerificationReport:
    fx = load_witness_fixture(name)
    report = verify_group_length_witness(fx.generators, fx.depth, fx.words, claim_id)
    report.parameters.update({"fixture": name, "dim": fx.dim, "jet_order": fx.order})
    return report


# -- global length-bound sanity ----------------------------------------------------------


def verify_length_bounds(heavy: bool = False) -> VerificationReport:
    """Every example the engine builds has to respect the applicable global
    bound: 2n for connected solvable, 2n-1 for unipotent solvable, n for
    nilpotent.  A violation anywhere fails the suite."""
    claim = _Claim("length-bounds", {"heavy": heavy})
    # chain algebras: connected solvable, bound 2n
    for n in (1, 2):
        length, _, _ = _solvable_lengths(n, default_solvable_order(n))
        claim.check(
            length is not None and length <= 2 * n,
            f"chain algebra n={n} exceeds the solvable bound",
        )
    # nilpotent family: bound n as nilpotent, 2n-1 as unipotent
    for n in (2, 3, 4):
        _, _, zs = build_nilpotent_example(n)
        g = bracket_closure(zs, "exact")
        length = soluble_length(g)
        claim.check(length is not NON_TERMINATING, f"nilpotent family n={n} not solvable")
        if length is not NON_TERMINATING:
            claim.check(length <= n, f"nilpotent family n={n}: length {length} > {n}")
            claim.check(length <= 2 * n - 1, f"nilpotent family n={n}: length {length} > {2 * n - 1}")
        claim.check(
            all(Z.is_formal() and Z.is_nilpotent() for Z in zs),
            f"family n={n} is not generated by nilpotent formal fields",
        )
    # planar family: unipotent in dimension 2, so derived length <= 3;
    # its commutator group is abelian, so sampled depth-2 derived words vanish
    rng = random.Random(11)
    order = 8
    ident = FormalDiffeo.identity(2, order)
    for _ in range(4):
        a, b, c, d = (random_intro_member(rng, 5, order) for _ in range(4))
        claim.check(
            a.commutator(b).commutator(c.commutator(d)) == ident,
            "planar family has a nontrivial depth-2 derived word",
        )
    return claim.report()


# -- the full suite -------------------------------------------------------------------


def run_all_verifications(
    seed: int = 0, heavy_solvable_n3: bool = False
) -> list[VerificationReport]:
    reports = []
    for k in (3, 4, 5):
        reports.append(verify_intro_nilpotency(k, k + 3, sample_count=6, seed=seed))
    reports.append(verify_solvable_family(1, 6))
    reports.append(verify_solvable_family(2, 12))
    if heavy_solvable_n3:
        reports.append(verify_solvable_family(3))
    for n in (2, 3, 4):
        reports.append(verify_nilpotent_example(n))
    reports.append(verify_group_witness_fixture("group_witness_n1.txt", "group-witness-n1"))
    reports.append(verify_group_witness_fixture("group_witness_n2.txt", "group-witness-n2"))
    reports.append(verify_length_bounds())
    return reports

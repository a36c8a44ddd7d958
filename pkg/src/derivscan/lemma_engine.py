"""Symbolic reconstruction of the coefficient chain behind affine targets.

Suppose d = y^m d/dx + (1 - x^alpha y) d/dy on k[x, y] and some
r = sum_{i=0}^{l} f_i(x) y^i satisfies d(r) = a*x + b.  Reading off the
y-coefficients of that equation forces, for every i >= 1,

    f'_{i-m}(x) = i x^alpha f_i(x) - (i+1) f_{i+1}(x)

with f_i = 0 outside 0..l.  Starting from the forced top of the chain
(f_l = 1 after normalization, the next m-1 entries undetermined scalars)
this module antidifferentiates its way down to f_0, adjoining one fresh
symbolic constant per step, and then checks everything that makes such an
r impossible: the exact degree schedule of the chain, the positivity /
negativity of the two tracked leading-coefficient ledgers, and the sign
clash that shuts down every candidate chain length.

All symbols (the undetermined scalars lambda_s and each integration
constant) are adjoined as genuine ring variables, so every statement here
is a statement about exact polynomials; there is no expression
simplifier anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Union

from .derivation import Derivation
from .poly import Polynomial

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class LemmaConfig:
    """Chain parameters: slope m >= 2, exponent alpha >= 1, and the chain
    depth j0 >= 1 fixing the top index l = m * j0."""

    m: int
    alpha: int
    j0: int

    def __post_init__(self):
        if self.m < 2:
            raise ValueError(f"m must be >= 2, got {self.m}")
        if self.alpha < 1:
            raise ValueError(f"alpha must be >= 1, got {self.alpha}")
        if self.j0 < 1:
            raise ValueError(f"j0 must be >= 1, got {self.j0}")

    @property
    def l(self) -> int:
        return self.m * self.j0


@dataclass(frozen=True)
class CoefficientSequence:
    """The reconstructed chain f_l .. f_0 in an extended polynomial ring.

    Ring layout (1-based variable indices):
      index 1                    x
      indices 2 .. m             lambda_1 .. lambda_{m-1}  (undetermined
                                 scalars for the constant top entries)
      indices m+1 .. l+1         integration constants, one per
                                 antiderivative step, named c<i> after the
                                 entry f_i they belong to
    """

    config: LemmaConfig
    arity: int
    entries: tuple[Polynomial, ...]
    registry: tuple[tuple[str, str], ...]

    def entry(self, i: int) -> Polynomial:
        """f_i; entries outside 0..l are identically zero."""
        if 0 <= i <= self.config.l:
            return self.entries[i]
        return Polynomial.zero(self.arity)

    def variable_index(self, name: str) -> int:
        for idx, (var_name, _) in enumerate(self.registry, start=1):
            if var_name == name:
                return idx
        raise KeyError(f"no ring variable named {name!r}")


@dataclass(frozen=True)
class LeadingData:
    """The two tracked coefficient ledgers, keyed by the step number j.

    A[j]   leading coefficient of f_{l-jm}       (claimed positive)
    B[j]   coefficient of x^{(j-1)(alpha+1)+1}
           in f_{l-jm-1}                         (claimed negative)
    Acompanion[j]   the symbolic x^{j(alpha+1)} coefficient of
                    f_{l-jm-1}, a rational multiple of lambda_1
    """

    A: Mapping[int, Fraction]
    B: Mapping[int, Fraction]
    Acompanion: Mapping[int, Polynomial]


def _antiderivative(p: Polynomial, index: int = 1) -> Polynomial:
    """Termwise antiderivative in one variable; exact in characteristic 0."""
    i = index - 1
    terms = {}
    for key, coeff in p.terms.items():
        e = key[i]
        terms[key[:i] + (e + 1,) + key[i + 1 :]] = coeff / (e + 1)
    return Polynomial(p.arity, terms)


def sequence_arity(cfg: LemmaConfig) -> int:
    return cfg.l + 1


def reconstruct_sequence(cfg: LemmaConfig) -> CoefficientSequence:
    """Rebuild f_l .. f_0 by repeated exact antidifferentiation.

    The top entry is normalized to 1, the next m-1 entries are fresh
    scalar symbols, and each step down computes
    f_{i-m} = antiderivative(i x^alpha f_i - (i+1) f_{i+1}) plus a fresh
    integration-constant symbol.
    """
    m, alpha, l = cfg.m, cfg.alpha, cfg.l
    arity = sequence_arity(cfg)
    registry: list[tuple[str, str]] = [("x", "variable")]
    registry += [(f"lam{s}", "lambda") for s in range(1, m)]
    registry += [(f"c{i}", "constant") for i in range(l - m, -1, -1)]

    x = Polynomial.variable(arity, 1)
    x_alpha = x ** alpha
    entries: list[Optional[Polynomial]] = [None] * (l + 1)
    entries[l] = Polynomial.constant(arity, 1)
    for s in range(1, m):
        entries[l - s] = Polynomial.variable(arity, 1 + s)

    next_constant = m + 1
    for i in range(l, m - 1, -1):
        f_i = entries[i]
        f_next = entries[i + 1] if i + 1 <= l else Polynomial.zero(arity)
        slope = x_alpha * f_i.scale(i) - f_next.scale(i + 1)
        entries[i - m] = _antiderivative(slope) + Polynomial.variable(
            arity, next_constant
        )
        next_constant += 1

    return CoefficientSequence(
        config=cfg,
        arity=arity,
        entries=tuple(entries),
        registry=tuple(registry),
    )


# -- degree schedule ---------------------------------------------------------


def degree_schedule(cfg: LemmaConfig) -> dict[int, tuple[str, int]]:
    """Expected x-degrees per entry index: ("exact", k) for the spine
    entries f_{l-mj}, ("at_most", k) for everything in between."""
    m, alpha, l, j0 = cfg.m, cfg.alpha, cfg.l, cfg.j0
    schedule: dict[int, tuple[str, int]] = {l: ("exact", 0)}
    for j in range(1, j0 + 1):
        schedule[l - m * j] = ("exact", j * (alpha + 1))
        for s in range(1, m):
            idx = l - m * j + s
            if idx < l:
                schedule[idx] = ("at_most", (j - 1) * (alpha + 1))
    return schedule


@dataclass(frozen=True)
class DegreeScheduleReport:
    config: LemmaConfig
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_degree_schedule(seq: CoefficientSequence) -> DegreeScheduleReport:
    """Compare the reconstructed chain against the expected schedule.

    Exact entries must hit their degree on the nose with a positive
    symbol-free rational leading coefficient (so the degree cannot be an
    artifact of the adjoined symbols); bounded entries must stay at or
    under their cap.
    """
    cfg = seq.config
    violations: list[str] = []
    for idx, (kind, value) in sorted(degree_schedule(cfg).items()):
        entry = seq.entry(idx)
        deg = entry.degree_in(1)
        if kind == "exact":
            if deg != value:
                violations.append(f"f_{idx}: deg_x = {deg}, expected exactly {value}")
                continue
            lead = entry.coefficient_of_power(1, value)
            if not lead.is_constant():
                violations.append(
                    f"f_{idx}: leading x-coefficient involves adjoined symbols"
                )
            elif lead.constant_value() <= 0:
                violations.append(
                    f"f_{idx}: leading x-coefficient {lead.constant_value()} not positive"
                )
        else:
            if deg > value:
                violations.append(f"f_{idx}: deg_x = {deg}, expected <= {value}")
    return DegreeScheduleReport(config=cfg, violations=tuple(violations))


# -- forced bottom of the chain ----------------------------------------------

#: Ring layout of closed_forms_low results: x1 = x, x2 = a, x3 = b.
CLOSED_FORM_ARITY = 3


def closed_forms_low(cfg: LemmaConfig) -> tuple[Polynomial, ...]:
    """The forced bottom entries f_1 .. f_m with symbolic a and b.

    The degree-zero row of d(r) = a*x + b forces f_1 = a*x + b, and the
    rows below the chain (where f_{i-m} = 0) force
    f_{i+1} = i x^alpha f_i / (i+1), giving
    f_i = (a x^{(i-1)alpha+1} + b x^{(i-1)alpha}) / i for 1 <= i <= m.
    Results live in the 3-variable ring (x, a, b).
    """
    alpha = cfg.alpha
    forms = []
    for i in range(1, cfg.m + 1):
        forms.append(
            Polynomial(
                CLOSED_FORM_ARITY,
                {
                    ((i - 1) * alpha + 1, 1, 0): Fraction(1, i),
                    ((i - 1) * alpha, 0, 1): Fraction(1, i),
                },
            )
        )
    return tuple(forms)


# -- leading-coefficient ledgers ----------------------------------------------


def leading_ledger(cfg: LemmaConfig) -> LeadingData:
    """Iterate the two leading-coefficient recurrences exactly.

    Base step (j = 1): A_1 = l/(alpha+1) and B_1 = -l.  Then

        A_j = (l-(j-1)m) A_{j-1} / (j(alpha+1))                 j <= j0
        B_j = ((l-(j-1)m-1) B_{j-1} - (l-(j-1)m) A_{j-1})
              / ((j-1)(alpha+1)+1)                              j <= j0-1

    together with the symbolic companion coefficient, a lambda_1 multiple
    following the same contraction as A.
    """
    m, alpha, l, j0 = cfg.m, cfg.alpha, cfg.l, cfg.j0
    arity = sequence_arity(cfg)
    lam1 = Polynomial.variable(arity, 2)

    A: dict[int, Fraction] = {1: Fraction(l, alpha + 1)}
    B: dict[int, Fraction] = {1: Fraction(-l)}
    companion: dict[int, Polynomial] = {1: lam1.scale(Fraction(l - 1, alpha + 1))}

    for j in range(2, j0 + 1):
        A[j] = A[j - 1] * Fraction(l - (j - 1) * m, j * (alpha + 1))
    for j in range(2, j0):
        B[j] = Fraction(
            (l - (j - 1) * m - 1) * B[j - 1] - (l - (j - 1) * m) * A[j - 1],
            (j - 1) * (alpha + 1) + 1,
        )
        companion[j] = companion[j - 1].scale(
            Fraction(l - (j - 1) * m - 1, j * (alpha + 1))
        )
    return LeadingData(A=A, B=B, Acompanion=companion)


# -- residual assembly ---------------------------------------------------------


def residual_registry(cfg: LemmaConfig) -> tuple[tuple[str, str], ...]:
    """Ring layout for residuals: the chain ring with y inserted at index 2."""
    seq_registry = [("x", "variable")]
    seq_registry += [(f"lam{s}", "lambda") for s in range(1, cfg.m)]
    seq_registry += [(f"c{i}", "constant") for i in range(cfg.l - cfg.m, -1, -1)]
    return (seq_registry[0], ("y", "variable"), *seq_registry[1:])


def residual(
    cfg: LemmaConfig,
    seq: CoefficientSequence,
    a: Union[Scalar, Polynomial],
    b: Union[Scalar, Polynomial],
) -> Polynomial:
    """Assemble d(r) - (a*x + b) for r = sum f_i y^i in the extended ring
    with y adjoined.

    The antidifferentiation steps kill every y-coefficient from the
    chain's own rows; what survives is exactly the handful of bottom rows
    whose consistency the sign ledgers refute.  a and b may be scalars or
    polynomials of the residual ring (so undetermined scalars like
    lambda_1 can be passed through).
    """
    if seq.config != cfg:
        raise ValueError("sequence was built from a different config")
    big_arity = seq.arity + 1
    mapping = {1: 1}
    mapping.update({k: k + 1 for k in range(2, seq.arity + 1)})

    x = Polynomial.variable(big_arity, 1)
    y = Polynomial.variable(big_arity, 2)
    r = Polynomial.zero(big_arity)
    for i, f in enumerate(seq.entries):
        r = r + f.rename_variables(big_arity, mapping) * y ** i

    coefficients = [y ** cfg.m, Polynomial.constant(big_arity, 1) - x ** cfg.alpha * y]
    coefficients += [Polynomial.zero(big_arity)] * (big_arity - 2)
    d = Derivation(big_arity, tuple(coefficients))

    a_poly = a if isinstance(a, Polynomial) else Polynomial.constant(big_arity, a)
    b_poly = b if isinstance(b, Polynomial) else Polynomial.constant(big_arity, b)
    return d.apply(r) - (a_poly * x + b_poly)


# -- contradiction certificates -------------------------------------------------


@dataclass(frozen=True)
class CaseResolution:
    """How one branch of the affine-target analysis is closed off."""

    label: str
    status: str  # "sign-clash" | "no-admissible-j0" | "degree-absurdity" | "excluded"
    equation: str
    j0: Optional[int]
    details: tuple[tuple[str, str], ...]

    def to_json_dict(self) -> dict:
        return {
            "label": self.label,
            "status": self.status,
            "equation": self.equation,
            "j0": self.j0,
            "details": {k: v for k, v in self.details},
        }


@dataclass(frozen=True)
class ContradictionCertificate:
    """A machine-checked record that no chain supports d(r) = a*x + b
    with (a, b) != (0, 0) or non-constant r, for one (m, alpha)."""

    m: int
    alpha: int
    j0_exclusion: CaseResolution
    cases: tuple[CaseResolution, ...]

    @property
    def complete(self) -> bool:
        terminal = {"sign-clash", "no-admissible-j0", "degree-absurdity"}
        return self.j0_exclusion.status == "excluded" and all(
            c.status in terminal for c in self.cases
        )

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "alpha": self.alpha,
            "complete": self.complete,
            "j0_exclusion": self.j0_exclusion.to_json_dict(),
            "cases": [c.to_json_dict() for c in self.cases],
        }


def _admissible_j0(target: int, alpha: int, m: int) -> Optional[int]:
    """Smallest j0 >= 2 with (j0-1)(alpha+1) = target, scanning the full
    candidate range; the matching equations bound j0 by (m-1)alpha + 1."""
    for j0 in range(2, (m - 1) * alpha + 2):
        if (j0 - 1) * (alpha + 1) == target:
            return j0
    return None


def contradiction_certificate(m: int, alpha: int) -> ContradictionCertificate:
    """Resolve every branch of the affine-target analysis for (m, alpha).

    Case 1 (a != 0) and case 2 (a = 0, b != 0) each force one candidate
    chain depth through a degree-matching equation; when an integer
    candidate exists the exact ledgers pin the target coefficient to be
    simultaneously positive and negative.  Case 3 (a = b = 0) dies on a
    degree count alone, and j0 = 1 is excluded up front by comparing the
    forced bottom entry against its scheduled degree.
    """
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")

    deg_a = (m - 1) * alpha + 1  # deg_x f_m when a != 0
    deg_b = (m - 1) * alpha  # deg_x f_m when a = 0, b != 0

    j0_exclusion = CaseResolution(
        label="j0-1",
        status="excluded",
        equation="deg_x f_m = (j0-1)(alpha+1) must be 0 when j0 = 1",
        j0=1,
        details=(
            ("deg_f_m_if_a_nonzero", str(deg_a)),
            ("deg_f_m_if_b_nonzero", str(deg_b)),
            ("deg_f_m_if_both_zero", "-inf"),
            (
                "why",
                "none of the possible degrees of the forced bottom entry is 0, "
                "so every chain has depth j0 >= 2",
            ),
        ),
    )

    def ledger_clash(case_label: str, j0: int, symbol: str, equation: str) -> CaseResolution:
        cfg = LemmaConfig(m, alpha, j0)
        ledger = leading_ledger(cfg)
        A_prev = ledger.A[j0 - 1]
        B_prev = ledger.B[j0 - 1]
        forced_pos = Fraction(m) * A_prev
        forced_neg = Fraction(m - 1) * B_prev
        details = [
            ("l", str(cfg.l)),
            (f"A_at_j{j0 - 1}", str(A_prev)),
            (f"B_at_j{j0 - 1}", str(B_prev)),
            (f"{symbol}_from_leading_slot", str(forced_pos)),
        ]
        if case_label == "case-1":
            details += [
                (f"{symbol}_from_subleading_slot", str(forced_neg)),
                (
                    "clash",
                    f"{symbol} = {forced_pos} > 0 from the top slot of f_m but "
                    f"{symbol} = {forced_neg} < 0 from the tracked slot of f_{{m-1}}",
                ),
            ]
        else:
            details += [
                (
                    "branch_companion_zero",
                    f"{symbol} = {forced_neg} < 0 from the tracked slot of "
                    f"f_{{m-1}}, clashing with {symbol} = {forced_pos} > 0",
                ),
                (
                    "branch_companion_nonzero",
                    f"would force (j0-1)(alpha+1) = {(m - 2) * alpha}, "
                    f"conflicting with the matching equation value {deg_b}",
                ),
            ]
        if not (A_prev > 0 and B_prev < 0):
            status = "sign-claim-violated"
        else:
            status = "sign-clash"
        return CaseResolution(
            label=case_label,
            status=status,
            equation=equation,
            j0=j0,
            details=tuple(details),
        )

    eq1 = f"(j0-1)({alpha}+1) = {deg_a}"
    j0_case1 = _admissible_j0(deg_a, alpha, m)
    if j0_case1 is None:
        case1 = CaseResolution(
            label="case-1",
            status="no-admissible-j0",
            equation=eq1,
            j0=None,
            details=(("why", f"{deg_a} is not a positive multiple of {alpha + 1}"),),
        )
    else:
        case1 = ledger_clash("case-1", j0_case1, "a", eq1)

    eq2 = f"(j0-1)({alpha}+1) = {deg_b}"
    j0_case2 = _admissible_j0(deg_b, alpha, m)
    if j0_case2 is None:
        case2 = CaseResolution(
            label="case-2",
            status="no-admissible-j0",
            equation=eq2,
            j0=None,
            details=(("why", f"{deg_b} is not a positive multiple of {alpha + 1}"),),
        )
    else:
        case2 = ledger_clash("case-2", j0_case2, "b", eq2)

    case3 = CaseResolution(
        label="case-3",
        status="degree-absurdity",
        equation="f_m = 0 yet deg_x f_m = (j0-1)(alpha+1)",
        j0=None,
        details=(
            (
                "why",
                "with a = b = 0 the forced bottom entry vanishes, but every "
                "admissible chain has j0 >= 2, so its scheduled degree "
                "(j0-1)(alpha+1) >= alpha+1 > 0",
            ),
        ),
    )

    return ContradictionCertificate(
        m=m,
        alpha=alpha,
        j0_exclusion=j0_exclusion,
        cases=(case1, case2, case3),
    )

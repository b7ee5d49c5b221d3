"""Decision procedures for m-linear multiplication of anisotropic spaces.

The main decision checks the index conditions (i)-(iii) together with the
constraints (a)-(f); the multiplier form specializes to instances where
one factor equals the target, the algebra criterion to squares.  All
strictness questions about the subset form of (iii) mean: strict for every
nonempty factor subset.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .embed import (ConditionLog, Decision, Status, TraceEntry, Verdict,
                    interpolate_complex)
from .errors import (ClosureFromUncovered, HypothesisViolation,
                     IncompatibleSpaces, Unsupported)
from .ratcore import AffineExpr, ParamEnv, Rational
from .spaces import (MultSignature, Scale, SpaceDescr, check_target_flags,
                     effective_scale, normalize, signature_registered,
                     sobolev_index)


@dataclass(frozen=True)
class MultInstance:
    """An m-linear pointwise multiplication between space descriptors."""

    factors: tuple[SpaceDescr, ...]
    target: SpaceDescr
    signature: MultSignature

    def __post_init__(self):
        if not self.factors:
            raise ValueError("a multiplication needs at least one factor")
        if len(self.signature.factor_targets) != len(self.factors):
            raise ValueError("signature arity does not match the factors")
        for sp, tg in zip(self.factors, self.signature.factor_targets):
            if sp.target != tg:
                raise ValueError("signature factor targets out of order")
        if self.target.target != self.signature.result_target:
            raise ValueError("signature result target does not match")
        for sp in self.factors:
            if sp.aniso != self.target.aniso:
                raise IncompatibleSpaces("factors must share the anisotropy")
            if sp.domain_label != self.target.domain_label:
                raise IncompatibleSpaces("factors must share the domain")

    @staticmethod
    def of(factors: Sequence[SpaceDescr], target: SpaceDescr) -> "MultInstance":
        sig = MultSignature(tuple(f.target for f in factors), target.target)
        return MultInstance(tuple(factors), target, sig)

    @property
    def m(self) -> int:
        return len(self.factors)

    def __str__(self) -> str:
        return " * ".join(str(f) for f in self.factors) + f" -> {self.target}"


def _require_concrete(inst: MultInstance) -> None:
    if any(not f.is_concrete for f in inst.factors) or not inst.target.is_concrete:
        raise Unsupported("symbolic integrability: use the parameter solver")


def _hypotheses(inst: MultInstance, log: ConditionLog) -> None:
    for sp in (*inst.factors, inst.target):
        check_target_flags(sp)
    log.passed("UMD value spaces", "hyp.umd")
    if not inst.target.aniso.is_isotropic:
        log.passed("property (alpha) for anisotropic weights", "hyp.alpha")
    else:
        log.skip("property (alpha) for anisotropic weights", "hyp.alpha",
                 "isotropic weights")
    if not signature_registered(inst.signature):
        raise HypothesisViolation(
            "unregistered multiplication signature "
            f"({', '.join(t.name for t in inst.signature.factor_targets)}) -> "
            f"{inst.signature.result_target.name}")
    log.passed("registered multiplication signature", "hyp.signature")


def _one_parameter_besov(spaces, env: ParamEnv, log: ConditionLog) -> bool:
    """Independent micro-scale parameters are outside the multiplication
    results; after normalization q = p is represented by an absent
    micro-scale."""
    ok = all(sp.scale is not Scale.B or sp.y is None or env.eq(sp.y, sp.x)
             for sp in spaces)
    return log.check("micro-scale equals integrability on the Besov scale",
                     "mult.besov-micro", ok)


def _subset_index_signs(ind: AffineExpr, inds: Sequence[AffineExpr],
                        env: ParamEnv) -> list[int]:
    """Signs of (sum over M of ind_j) - ind for every nonempty subset M.

    Subset sums are built incrementally over bitmasks (sum over M equals
    the sum over M minus its lowest element, plus that element).
    """
    m = len(inds)
    if env.recorder is None:
        vt = env.value(ind)
        vals = [env.value(e) for e in inds]
    else:
        vt = ind
        vals = list(inds)
    sums: list = [None] * (1 << m)
    signs = []
    for mask in range(1, 1 << m):
        low = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        total = vals[low] if rest == 0 else sums[rest] + vals[low]
        sums[mask] = total
        if env.recorder is None:
            d = total - vt
            signs.append((d > 0) - (d < 0))
        else:
            signs.append(env.sign(total - vt))
    return signs


def decide_multiplication(inst: MultInstance) -> Decision:
    """Decide the m-linear multiplication (concrete parameters)."""
    _require_concrete(inst)
    return decide_multiplication_in(inst, ParamEnv.concrete())


def decide_multiplication_in(inst: MultInstance, env: ParamEnv) -> Decision:
    """Evaluates the conditions in their documented order and stops at the
    first failure (the trace names the first failed condition); a failure
    of (d) alone continues through (e) and (f) so that it can be flagged."""
    log = ConditionLog()
    _hypotheses(inst, log)

    facs = [normalize(f, env) for f in inst.factors]
    tgt = normalize(inst.target, env)
    wd = tgt.aniso.omega_dot
    if not _one_parameter_besov([*facs, tgt], env, log):
        return log.decision()

    ok_range = env.ge(tgt.s, 0) and all(env.ge(f.s, 0) for f in facs)
    ok_range = ok_range and env.gt(tgt.x, 0) and env.lt(tgt.x, 1)
    if ok_range:
        for f in facs:
            if not (env.gt(f.x, 0) and env.lt(f.x, 1)):
                ok_range = False
                break
    if not log.check("parameter ranges", "mult.range", ok_range):
        return log.decision()

    # (i) and (ii)
    i_signs = [env.cmp(f.s, tgt.s) for f in facs]
    i_ok = all(sg >= 0 for sg in i_signs)
    i_strict = all(sg > 0 for sg in i_signs)
    if not log.check("(i) smoothness dominated by every factor", "mult.i",
                     i_ok, "strict" if i_strict else ""):
        return log.decision()
    ii_sign = env.sum_sign([f.x for f in facs], tgt.x)
    if not log.check("(ii) reciprocal integrability dominated by the sum",
                     "mult.ii", ii_sign >= 0,
                     "strict" if ii_sign > 0 else
                     ("equal" if ii_sign == 0 else "")):
        return log.decision()

    # (iii) in subset form
    ind = sobolev_index(tgt)
    inds = [sobolev_index(f) for f in facs]
    iii_signs = _subset_index_signs(ind, inds, env)
    iii_ok = all(sg >= 0 for sg in iii_signs)
    iii_strict = all(sg > 0 for sg in iii_signs)
    if not log.check("(iii) index dominated over every factor subset",
                     "mult.iii", iii_ok, "strict" if iii_strict else
                     ("equal for some subset" if iii_ok else "")):
        return log.decision()

    x_t = effective_scale(tgt)
    x_f = [effective_scale(f) for f in facs]

    # (a)
    off_scale = [j for j, xf in enumerate(x_f) if xf is not x_t]
    if off_scale:
        if not log.check("(a) off-scale factors strictly smoother", "mult.a",
                         all(i_signs[j] > 0 for j in off_scale)):
            return log.decision()
    else:
        log.skip("(a) off-scale factors strictly smoother", "mult.a",
                 "all factors on the target scale")

    # (b)
    if x_t is Scale.B:
        equal_s = [j for j, sg in enumerate(i_signs) if sg == 0]
        ok_b = env.gt(tgt.s, 0) and all(env.eq(facs[j].x, tgt.x)
                                        for j in equal_s)
        if not log.check("(b) positive smoothness; equal-smoothness factors "
                         "share the integrability", "mult.b", ok_b):
            return log.decision()
    else:
        log.skip("(b) positive smoothness; equal-smoothness factors share "
                 "the integrability", "mult.b", "target not on the Besov scale")

    # (c)
    if x_t is Scale.B:
        if iii_strict:
            log.skip("(c) index strict or no factor exponent above the "
                     "target one", "mult.c", "(iii) strict")
        elif not log.check("(c) index strict or no factor exponent above the "
                           "target one", "mult.c",
                           all(env.ge(f.x, tgt.x) for f in facs)):
            return log.decision()
    else:
        log.skip("(c) index strict or no factor exponent above the target "
                 "one", "mult.c", "target not on the Besov scale")

    # (d)
    if x_t is Scale.H:
        d_ok = env.is_multiple(tgt.s, wd, allow_zero=True) or i_strict or \
            ii_sign == 0
        log.check("(d) smoothness multiple of lcm(w), or (i) strict, or "
                  "equality in (ii)", "mult.d", d_ok)
    else:
        log.skip("(d) smoothness multiple of lcm(w), or (i) strict, or "
                 "equality in (ii)", "mult.d", "target not on the "
                 "Bessel-potential scale")

    # (e)
    if off_scale:
        log.check("(e) (ii) or (iii) strict for mixed scales", "mult.e",
                  ii_sign > 0 or iii_strict)
    else:
        log.skip("(e) (ii) or (iii) strict for mixed scales", "mult.e",
                 "all factors on the target scale")

    # (f)
    zero_ind = [j for j, e in enumerate(inds) if env.eq(e, 0)]
    if zero_ind:
        log.check("(f) (iii) strict when a factor index vanishes", "mult.f",
                  iii_strict)
    else:
        log.skip("(f) (iii) strict when a factor index vanishes", "mult.f",
                 "no factor index vanishes")

    decision = log.decision()
    failed = [e.anchor for e in decision.trace if e.status is Status.FAIL]
    if failed == ["mult.d"]:
        entries = [e if e.anchor != "mult.d" else
                   TraceEntry(e.label, e.anchor, e.status,
                              "(d)-only failure: conjecturally removable")
                   for e in decision.trace]
        decision = Decision(decision.verdict, tuple(entries))
    return decision


def decide_multiplier(inst: MultInstance, ell: int) -> Decision:
    """Decide the multiplier form: factor ``ell`` (1-based) equals the
    target and the remaining factors act as multipliers."""
    _require_concrete(inst)
    return decide_multiplier_in(inst, ell, ParamEnv.concrete())


def decide_multiplier_in(inst: MultInstance, ell: int,
                         env: ParamEnv) -> Decision:
    if not 1 <= ell <= inst.m:
        raise ValueError(f"factor index {ell} out of 1..{inst.m}")
    log = ConditionLog()
    _hypotheses(inst, log)

    facs = [normalize(f, env) for f in inst.factors]
    tgt = normalize(inst.target, env)
    if not _one_parameter_besov([*facs, tgt], env, log):
        return log.decision()
    pivot = facs[ell - 1]
    if pivot.scale is not tgt.scale or pivot.s != tgt.s or \
            pivot.x != tgt.x or pivot.y != tgt.y:
        raise HypothesisViolation(
            f"factor {ell} must equal the target in scale, smoothness and "
            f"integrability; got {pivot} vs {tgt}")
    log.passed("pivot factor equals the target", "multiplier.pivot")

    ok_range = env.ge(tgt.s, 0) and all(env.ge(f.s, tgt.s) for f in facs)
    ok_range &= env.gt(tgt.x, 0) and env.lt(tgt.x, 1)
    for f in facs:
        ok_range &= env.gt(f.x, 0) and env.lt(f.x, 1)
    log.check("smoothness ordered and exponents in (1, oo)",
              "multiplier.range", ok_range)

    ind = sobolev_index(tgt)
    others = [(j, f) for j, f in enumerate(facs, start=1) if j != ell]
    log.check("non-pivot factor indices positive", "multiplier.index-positive",
              all(env.gt(sobolev_index(f), 0) for _, f in others))
    log.check("non-pivot factor indices dominate the target index",
              "multiplier.index-dominates",
              all(env.ge(sobolev_index(f), ind) for _, f in others))

    x_t = effective_scale(tgt)
    off_scale = [(j, f) for j, f in others if effective_scale(f) is not x_t]
    if off_scale:
        log.check("(a) off-scale factors strictly smoother", "multiplier.a",
                  all(env.gt(f.s, tgt.s) for _, f in off_scale))
    else:
        log.skip("(a) off-scale factors strictly smoother", "multiplier.a",
                 "all factors on the target scale")

    if x_t is Scale.B:
        log.check("(b) positive smoothness and no factor exponent above the "
                  "target one", "multiplier.b",
                  env.gt(tgt.s, 0) and all(env.ge(f.x, tgt.x) for f in facs))
    else:
        log.skip("(b) positive smoothness and no factor exponent above the "
                 "target one", "multiplier.b", "target not on the Besov scale")

    if x_t is Scale.H:
        log.check("(c) smoothness multiple of lcm(w)", "multiplier.c",
                  env.is_multiple(tgt.s, tgt.aniso.omega_dot, allow_zero=True))
    else:
        log.skip("(c) smoothness multiple of lcm(w)", "multiplier.c",
                 "target not on the Bessel-potential scale")

    return log.decision()


def decide_algebra(space: SpaceDescr) -> Decision:
    """Multiplication-algebra criterion for a single space."""
    if not space.is_concrete:
        raise Unsupported("symbolic integrability: use the parameter solver")
    return decide_algebra_in(space, ParamEnv.concrete())


def decide_algebra_in(space: SpaceDescr, env: ParamEnv) -> Decision:
    if not space.target.banach_algebra:
        raise HypothesisViolation(
            f"value space {space.target.name} is not a Banach algebra")
    head = TraceEntry("Banach-algebra value space", "hyp.algebra", Status.PASS)
    inst = MultInstance.of((space, space), space)
    inner = decide_multiplier_in(inst, 1, env)
    return Decision(inner.verdict, (head, *inner.trace))


def reduced_multiplication(inst: MultInstance,
                           omit: Sequence[int] | set[int]) -> Decision:
    """Decision for the reduced multiplication with the omitted factor
    slots (1-based) filled by the unit of their value algebra."""
    _require_concrete(inst)
    return reduced_multiplication_in(inst, omit, ParamEnv.concrete())


def reduced_multiplication_in(inst: MultInstance, omit: Sequence[int] | set[int],
                              env: ParamEnv) -> Decision:
    omitted = frozenset(omit)
    slots = set(range(1, inst.m + 1))
    if not omitted or not omitted < slots:
        raise ValueError("omitted slots must form a nonempty proper subset")
    log = ConditionLog()
    for j in sorted(omitted):
        t = inst.factors[j - 1].target
        if not t.unital:
            raise HypothesisViolation(
                f"omitted factor {j} takes values in {t.name}, which has no unit")
    log.passed("omitted factors are unital Banach algebras",
               "mult.reduced.unital")
    log.check("no factor exponent above the target one",
              "mult.reduced.max-p",
              all(env.ge(f.x, inst.target.x) for f in inst.factors))
    kept = tuple(f for j, f in enumerate(inst.factors, start=1)
                 if j not in omitted)
    reduced = MultInstance(kept, inst.target, inst.signature.reduced(omitted))
    inner = decide_multiplication_in(reduced, env)
    log.entries.extend(inner.trace)
    return log.decision()


def interpolation_closure(inst_a: MultInstance, inst_b: MultInstance,
                          theta: Rational,
                          assume_covered: tuple[bool, bool] = (False, False),
                          ) -> tuple[MultInstance, Decision]:
    """Componentwise complex interpolation of two covered instances.

    Parents must be COVERED as decided, or asserted by the caller via
    ``assume_covered``; the endpoints theta = 0, 1 return the parents
    verbatim.
    """
    theta = Fraction(theta)
    if not 0 <= theta <= 1:
        raise ValueError("interpolation parameter must lie in [0, 1]")
    log = ConditionLog()
    for name, inst, assumed in (("first", inst_a, assume_covered[0]),
                                ("second", inst_b, assume_covered[1])):
        if assumed:
            log.passed(f"{name} parent asserted by the caller",
                       "mult.closure.parent", "asserted")
            continue
        parent = decide_multiplication(inst)
        if parent.verdict is not Verdict.COVERED:
            fail = parent.first_failure()
            raise ClosureFromUncovered(
                f"{name} parent not covered"
                + (f" (first failed condition: {fail.label})" if fail else ""))
        log.passed(f"{name} parent covered", "mult.closure.parent")
    if theta == 0:
        log.passed("endpoint: first parent returned verbatim", "mult.closure")
        return inst_a, log.decision()
    if theta == 1:
        log.passed("endpoint: second parent returned verbatim", "mult.closure")
        return inst_b, log.decision()
    if inst_a.m != inst_b.m:
        raise ClosureFromUncovered("parents have different arities")
    factors = tuple(interpolate_complex(fa, fb, theta)
                    for fa, fb in zip(inst_a.factors, inst_b.factors))
    target = interpolate_complex(inst_a.target, inst_b.target, theta)
    out = MultInstance.of(factors, target)
    log.passed("bilinear complex interpolation of the parents",
               "mult.closure", f"theta = {theta}")
    return out, log.decision()

"""Evaluation of the regulator over a point: line integrals along traced cut
loci, signed crossing sums, lattice reduction, phase-independence checks, and
torsion recognition.

For a closed normalized curve in the 3-cube the value of one component is

    mult * ( L  -  2*pi*i * P ),   where
    L = integral over the first cut locus of log^{eps_2}(f_2) dlog f_3
        (pole -> zero orientation), and
    P = sum over crossings of the first two loci of sign * log^{eps_3}(f_3).

The relative coefficient -2*pi*i between the two terms is forced: varying
eps_2 sweeps the second cut across the path, and the branch jump of the line
integral at each crossing must cancel against the motion of the crossing sum
for the total to be schedule-independent.  The overall orientation convention
is pinned by the classical value pi^2/6 of the Totaro curve, after which
every other fixture is a zero-freedom check.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction

import mpmath as mp

from .cycles import check_face_proper, is_closed, is_normalized, normalize
from .errors import (
    ChowregError,
    ConvergenceError,
    PrecisionError,
    PropernessError,
    ScheduleError,
)
from .field import embed
from .funcfield import INF, RFEvaluator
from .numeric import ComplexApprox, workprec
from .special import BranchSpec, log_eps
from .wavefront import (
    PhaseSchedule,
    admissible,
    find_pair_intersections,
    make_schedule,
    search_schedule,
    trace_wavefront,
)


@dataclass
class RegulatorValue:
    """A value in C modulo (2*pi*i)^p with error accounting.

    ``value`` is the canonical representative (lattice coefficient in
    [-1/2, 1/2)); ``breakdown`` lists per-component line-integral and crossing
    contributions, which sum to the pre-reduction value.
    """

    p: int
    value: ComplexApprox
    schedule_used: object
    quadrature_error: float
    breakdown: list = dataclass_field(default_factory=list)
    lattice_multiple: int = 0
    agreement: list = dataclass_field(default_factory=list)

    @property
    def lattice_power(self):
        return self.p

    def lattice_generator(self):
        return (2 * mp.pi * mp.mpc(0, 1)) ** self.p

    def q_value(self):
        """value / (2*pi*i)^p."""
        return self.value.value / self.lattice_generator()


@dataclass
class TorsionResult:
    order: object
    certificate: object
    residual: float


def _canonical_mod_lattice(value, p):
    """Shift by the lattice so the generator coefficient lies in [-1/2, 1/2)."""
    gen = (2 * mp.pi * mp.mpc(0, 1)) ** p
    coeff = value.real / gen.real if p % 2 == 0 else value.imag / gen.imag
    k = int(mp.floor(coeff + mp.mpf("0.5")))
    return value - k * gen, k


def lattice_difference(a, b, p):
    """(a - b) reduced mod (2*pi*i)^p: returns (integer multiple, residual)."""
    gen = (2 * mp.pi * mp.mpc(0, 1)) ** p
    diff = mp.mpc(a) - mp.mpc(b)
    coeff = diff.real / gen.real if p % 2 == 0 else diff.imag / gen.imag
    k = int(mp.floor(coeff + mp.mpf("0.5")))
    return k, abs(diff - k * gen)


def reg_n1(Z, phase, precision_bits=None):
    """Sum of perturbed logs over a point-level cycle in the 1-cube."""
    if precision_bits is None:
        precision_bits = mp.mp.prec
    if not (Z.is_point_level and Z.n == 1):
        raise ChowregError("reg_n1 needs a point-level cycle in the 1-cube")
    branch = BranchSpec(mp.mpf(phase))
    with workprec(precision_bits):
        total = ComplexApprox(mp.mpc(0), 0.0)
        breakdown = []
        for pt in Z.components:
            (v,) = pt.coords
            if v is INF:
                raise ChowregError("reg_n1 undefined at a coordinate equal to oo")
            ball = v if isinstance(v, ComplexApprox) else embed(v, precision_bits)
            if ball.contains_zero():
                raise ChowregError("reg_n1 undefined at a coordinate equal to 0")
            lg = log_eps(ball, branch)
            total = total + pt.mult * lg
            breakdown.append({"point": str(pt), "log": lg, "mult": pt.mult})
        canon, k = _canonical_mod_lattice(total.value, 1)
        return RegulatorValue(
            p=1,
            value=ComplexApprox(canon, total.radius),
            schedule_used=PhaseSchedule(mp.mpf(1), (mp.mpf(phase),)),
            quadrature_error=total.radius,
            breakdown=breakdown,
            lattice_multiple=k,
        )


def _tanh_sinh_segment(fn, a, b, tol, precision_bits, max_level=9):
    """Double-exponential quadrature of an analytic integrand on [a, b].

    Error is estimated from the last level-to-level difference; estimates that
    stop decreasing raise ConvergenceError.
    """
    a = mp.mpf(a)
    b = mp.mpf(b)
    if a == b:
        return mp.mpc(0), 0.0
    mid = (a + b) / 2
    half = (b - a) / 2
    eps_w = mp.mpf(2) ** (-precision_bits - 8)
    w_floor = mp.mpf(2) ** (-precision_bits - 48)
    tau_max = mp.asinh(2 * mp.log(4 / eps_w) / mp.pi)

    cache = {}

    def eval_at(tau):
        val = cache.get(tau)
        if val is None:
            s = mp.pi / 2 * mp.sinh(tau)
            w = mp.pi / 2 * mp.cosh(tau) / mp.cosh(s) ** 2
            if w < w_floor:
                val = mp.mpc(0)
            else:
                u = mid + half * mp.tanh(s)
                if u <= a or u >= b:
                    val = mp.mpc(0)
                else:
                    val = fn(u) * w
            cache[tau] = val
        return val

    h = mp.mpf(1)
    kmax = int(mp.ceil(tau_max / h))
    total = eval_at(mp.mpf(0))
    for j in range(1, kmax + 1):
        total += eval_at(j * h) + eval_at(-j * h)
    results = [total * h * half]
    err_prev = None
    for level in range(1, max_level + 1):
        h = h / 2
        kmax = int(mp.ceil(tau_max / h))
        for j in range(1, kmax + 1, 2):
            total += eval_at(j * h) + eval_at(-j * h)
        results.append(total * h * half)
        err = float(abs(results[-1] - results[-2]))
        if err < tol * max(1.0, float(abs(results[-1]))):
            return results[-1], err + float(eps_w)
        if err_prev is not None and err > 4 * err_prev and err > 1e-6:
            raise ConvergenceError(
                f"quadrature estimates stopped decreasing (level {level}, "
                f"error {err:.3g})")
        err_prev = err
    if err_prev is None or err_prev > 1e-6 * max(1.0, float(abs(results[-1]))):
        raise ConvergenceError(
            f"quadrature did not reach tolerance {tol:.3g} (last error {err_prev})")
    return results[-1], err_prev + float(eps_w)


_CHUNK_LENGTH = 8.0


def quadrature(path, integrand, precision_bits=None, tol=None, max_level=8,
               in_parameter=False, u_range=None, integrand_u=None,
               tails=(True, True)):
    """Integrate along a traced path, pole -> zero.

    ``integrand`` maps the curve parameter t to a complex value and is
    integrated against dt along the oriented path.  With ``in_parameter`` it
    is integrated against the monotone log-radius parameter instead.  The
    internal hook ``integrand_u`` takes the increasing path parameter u
    (= -log radius) directly and already includes any dt/du factor.

    The range is cut into bounded chunks and each chunk integrated by the
    double-exponential rule; chunks in the exponential tails converge at the
    first levels, so the cost concentrates where the integrand lives.
    """
    if precision_bits is None:
        precision_bits = mp.mp.prec
    if tol is None:
        tol = float(mp.mpf(2) ** (-precision_bits // 3))
    with workprec(precision_bits + 16):
        ev = path.evaluator
        if u_range is None:
            u_lo, u_hi = -path.sigma_hi, -path.sigma_lo
        else:
            u_lo, u_hi = mp.mpf(u_range[0]), mp.mpf(u_range[1])

        if integrand_u is not None:
            fn = integrand_u
        elif in_parameter:
            def fn(u):
                return integrand(path.point_at(-u))
        else:
            def fn(u):
                t = path.point_at(-u)
                # dt/du along pole -> zero: u = -log r, dt/du = -1/(dlog f)
                return -integrand(t) / ev.dlog(t)

        span = u_hi - u_lo
        chunks = max(1, int(mp.ceil(span / _CHUNK_LENGTH)))
        step = span / chunks
        total = mp.mpc(0)
        err = 0.0
        for k in range(chunks):
            a = u_lo + k * step
            b = u_lo + (k + 1) * step if k < chunks - 1 else u_hi
            val, e = _tanh_sinh_segment(fn, a, b, tol, precision_bits, max_level)
            total += val
            err += e
        # truncation-tail allowance, only at true path ends
        tail = 0.0
        if tails[0]:
            tail += float(abs(fn(u_lo + mp.mpf("1e-9") * span)))
        if tails[1]:
            tail += float(abs(fn(u_hi - mp.mpf("1e-9") * span)))
        return ComplexApprox(total, err + 2.0 * tail)


def _sided_log_branch(w, phase, guard, side_hint):
    """log with argument in (-pi-phase, pi-phase]; the hint resolves values
    inside the guard sliver around the cut by continuity from one side."""
    phi = mp.arg(-w * mp.e ** (1j * phase))
    if side_hint > 0:
        subtract = phi > -guard
    elif side_hint < 0:
        subtract = phi > guard
    else:
        subtract = phi > 0
    theta = mp.pi - phase + phi - (2 * mp.pi if subtract else 0)
    return mp.mpc(mp.log(abs(w)), theta)


def reg_n3(Z, schedule, precision_bits=None, tol=None, check=True,
           trace_grid=None):
    """Regulator of a curve-level cycle in the 3-cube at a fixed schedule.

    The k=1 term of the current (a holomorphic 2-form) vanishes identically
    on a complex curve and is skipped; ``two_form_pullback_sample`` records
    that assertion.
    """
    if precision_bits is None:
        precision_bits = mp.mp.prec
    if tol is None:
        tol = float(mp.mpf(2) ** (-precision_bits // 3))
    if not (Z.is_curve_level and Z.n == 3):
        raise ChowregError("reg_n3 needs a curve-level cycle in the 3-cube")
    if check:
        rep = admissible(Z, schedule, precision_bits=precision_bits)
        if not rep.ok:
            raise ScheduleError(
                "cycle is not admissible at the requested schedule: "
                + "; ".join(f.kind for f in rep.failures))
    eps1, eps2, eps3 = schedule.phases
    guard = mp.mpf(2) ** (-precision_bits // 2)
    with workprec(precision_bits):
        two_pi_i = 2 * mp.pi * mp.mpc(0, 1)
        total = mp.mpc(0)
        total_err = 0.0
        breakdown = []
        for ci, comp in enumerate(Z.components):
            f1, f2, f3 = comp.coords
            entry = {"component": ci, "mult": comp.mult,
                     "line_integral": ComplexApprox(mp.mpc(0), 0.0),
                     "crossing_sum": ComplexApprox(mp.mpc(0), 0.0),
                     "crossings": []}
            if f1.is_constant():
                breakdown.append(entry)
                continue
            paths = trace_wavefront(comp, 1, eps1, grid=trace_grid,
                                    precision_bits=precision_bits)
            crossings = find_pair_intersections(
                comp, paths, 2, eps2, precision_bits=precision_bits)

            # crossing sum P
            p_sum = ComplexApprox(mp.mpc(0), 0.0)
            ev3 = RFEvaluator(f3, precision_bits) if not f3.is_constant() else None
            for c in crossings:
                if ev3 is None:
                    v3 = embed(f3.constant_value(), precision_bits)
                else:
                    v3 = ComplexApprox(ev3.value(c.t.value), c.t.radius * 4.0)
                lg = log_eps(v3, BranchSpec(eps3))
                p_sum = p_sum + c.sign * lg
                entry["crossings"].append({"t": c.t, "sign": c.sign, "log_f3": lg})

            # line integral L, split at crossings, branch fixed by continuity
            line = ComplexApprox(mp.mpc(0), 0.0)
            if not f3.is_constant():
                ev3q = ev3
                ev2 = RFEvaluator(f2, precision_bits) if not f2.is_constant() else None
                const_log2 = None
                if ev2 is None:
                    const_log2 = log_eps(embed(f2.constant_value(), precision_bits),
                                         BranchSpec(eps2)).value
                for path in paths:
                    xs = sorted((c for c in crossings if c.host_path is path),
                                key=lambda c: float(-c.sigma))
                    u_lo, u_hi = -path.sigma_hi, -path.sigma_lo
                    cut_us = [mp.mpf(-c.sigma) for c in xs]
                    bounds = [u_lo] + cut_us + [u_hi]
                    for seg in range(len(bounds) - 1):
                        a, b = bounds[seg], bounds[seg + 1]
                        if not (b > a):
                            continue
                        left_sign = xs[seg - 1].sign if seg >= 1 else 0
                        right_sign = -xs[seg].sign if seg < len(xs) else 0

                        def fn(u, _a=a, _b=b, _l=left_sign, _r=right_sign,
                               _path=path):
                            t = _path.point_at(-u)
                            if const_log2 is not None:
                                lg2 = const_log2
                            else:
                                hint = _l if (u - _a) <= (_b - u) else _r
                                lg2 = _sided_log_branch(ev2.value(t), eps2,
                                                        guard, hint)
                            return -(lg2 * ev3q.dlog(t)) / _path.evaluator.dlog(t)

                        piece = quadrature(path, None,
                                           precision_bits=precision_bits,
                                           tol=tol, u_range=(a, b),
                                           integrand_u=fn,
                                           tails=(seg == 0,
                                                  seg == len(bounds) - 2))
                        line = line + piece
            entry["line_integral"] = line
            entry["crossing_sum"] = p_sum
            breakdown.append(entry)
            total += comp.mult * (line.value - two_pi_i * p_sum.value)
            total_err += abs(comp.mult) * (line.radius + float(2 * mp.pi) * p_sum.radius)
        canon, k = _canonical_mod_lattice(total, 2)
        return RegulatorValue(
            p=2,
            value=ComplexApprox(canon, total_err),
            schedule_used=schedule,
            quadrature_error=total_err,
            breakdown=breakdown,
            lattice_multiple=k,
        )


def two_form_pullback_sample(comp, t, precision_bits=None):
    """Coefficient of the pulled-back holomorphic 2-form at a parameter.

    On a one-dimensional complex curve dz_2/z_2 wedge dz_3/z_3 pulls back
    through a single dt, so the antisymmetrized coefficient is identically
    zero; the sampler exists to record that assertion next to the term it
    justifies skipping."""
    if precision_bits is None:
        precision_bits = mp.mp.prec
    with workprec(precision_bits):
        g2 = RFEvaluator(comp.coords[1], precision_bits).dlog(mp.mpc(t))
        g3 = RFEvaluator(comp.coords[2], precision_bits).dlog(mp.mpc(t))
        return g2 * g3 - g3 * g2


def intersection_number_n2(Z, schedule, precision_bits=None, check=True):
    """Signed crossing count of the two cut loci on a curve in the 2-cube."""
    if precision_bits is None:
        precision_bits = mp.mp.prec
    if not (Z.is_curve_level and Z.n == 2):
        raise ChowregError("intersection_number_n2 needs a curve in the 2-cube")
    if check:
        rep = admissible(Z, schedule, precision_bits=precision_bits)
        if not rep.ok:
            raise ScheduleError(
                "cycle is not admissible at the requested schedule: "
                + "; ".join(f.kind for f in rep.failures))
    count = 0
    with workprec(precision_bits):
        for comp in Z.components:
            if comp.coords[0].is_constant():
                continue
            paths = trace_wavefront(comp, 1, schedule.phases[0],
                                    precision_bits=precision_bits)
            crossings = find_pair_intersections(
                comp, paths, 2, schedule.phases[1], precision_bits=precision_bits)
            count += comp.mult * sum(c.sign for c in crossings)
    return count


def regulator(Z, precision_bits=None, tol=1e-8, eps_start=0.3, seed=0,
              shrink=3.0, trace_grid=None):
    """Top-level pipeline: normalize if needed, find a schedule, evaluate at
    three shrinking bounds, check pairwise lattice agreement, and return the
    smallest-bound evaluation annotated with the agreement report."""
    if precision_bits is None:
        precision_bits = mp.mp.prec
    with workprec(precision_bits):
        if Z.is_point_level and Z.n == 1:
            values = []
            bound = mp.mpf(eps_start)
            for _ in range(3):
                values.append((bound, reg_n1(Z, bound / 2, precision_bits)))
                bound = bound / mp.mpf(shrink)
            return _reconcile(values, 1, tol)
        if Z.is_curve_level and Z.n == 2:
            raise ChowregError(
                "curves in the 2-cube carry the chain-level intersection "
                "number; use intersection_number_n2")
        if not (Z.is_curve_level and Z.n == 3):
            raise ChowregError(f"no regulator evaluation for n={Z.n}, p={Z.p}")
        proper = check_face_proper(Z)
        if not proper["ok"]:
            raise PropernessError(f"cycle is not face-proper: {proper['violations']}")
        if not is_closed(Z, precision_bits):
            raise ChowregError("cycle is not closed; the regulator needs ker(boundary)")
        if not is_normalized(Z):
            Z = normalize(Z)
        values = []
        bound = mp.mpf(eps_start)
        for k in range(3):
            s = search_schedule(Z, bound, seed=seed, precision_bits=precision_bits)
            v = reg_n3(Z, s, precision_bits=precision_bits, check=False,
                       trace_grid=trace_grid)
            values.append((bound, v))
            bound = bound / mp.mpf(shrink)
        return _reconcile(values, 2, tol)


def _reconcile(values, p, tol):
    """Pairwise lattice agreement of evaluations at shrinking bounds; refuses
    to return anything when they disagree beyond combined errors."""
    agreement = []
    for a in range(len(values)):
        for b in range(a + 1, len(values)):
            (ba, va), (bb, vb) = values[a], values[b]
            k, resid = lattice_difference(va.value.value, vb.value.value, p)
            budget = va.quadrature_error + vb.quadrature_error + tol
            entry = {
                "bounds": (float(ba), float(bb)),
                "lattice_multiple": k,
                "residual": float(resid),
                "ok": float(resid) <= budget,
            }
            agreement.append(entry)
            if not entry["ok"]:
                raise ChowregError(
                    "evaluations at different schedules disagree beyond "
                    f"combined errors (residual {float(resid):.3g}); this "
                    "indicates a sign or transversality defect, refusing to "
                    "average")
    final = values[-1][1]
    final.agreement = agreement
    return final


def phase_independence_check(Z, schedules, precision_bits=None, tol=1e-8):
    """Evaluate at each schedule and compare pairwise mod the lattice."""
    if precision_bits is None:
        precision_bits = mp.mp.prec
    vals = []
    with workprec(precision_bits):
        for s in schedules:
            if Z.is_curve_level and Z.n == 3:
                vals.append(reg_n3(Z, s, precision_bits=precision_bits))
            elif Z.is_point_level and Z.n == 1:
                vals.append(reg_n1(Z, s.phases[0], precision_bits))
            else:
                raise ChowregError("phase independence applies to n=1 or n=3 cycles")
        p = vals[0].p
        report = {"ok": True, "pairs": [], "values": vals}
        for a in range(len(vals)):
            for b in range(a + 1, len(vals)):
                k, resid = lattice_difference(vals[a].value.value,
                                              vals[b].value.value, p)
                budget = vals[a].quadrature_error + vals[b].quadrature_error + tol
                ok = float(resid) <= budget
                report["pairs"].append({
                    "schedules": (a, b),
                    "lattice_multiple": k,
                    "residual": float(resid),
                    "ok": ok,
                })
                report["ok"] = report["ok"] and ok
        return report


def _fraction_from_real(x):
    sign, man, exp, _ = mp.mpf(x)._mpf_
    if man == 0:
        return Fraction(0)
    v = Fraction(-man if sign else man)
    return v * Fraction(2) ** exp


def _cf_minimal_denominator(x, max_order, tol):
    """Smallest denominator m <= max_order with |x - p/m| < tol/m, via the
    continued-fraction convergents of x (best approximations, so the first
    qualifying convergent has the minimal denominator)."""
    tol_f = Fraction(tol).limit_denominator(10 ** 15)
    n, d = x.numerator, x.denominator
    p_prev, p_curr = 1, 0
    q_prev, q_curr = 0, 1
    n, d = int(n), int(d)
    while d:
        a = n // d
        n, d = d, n - a * d
        p_prev, p_curr = a * p_prev + p_curr, p_prev
        q_prev, q_curr = a * q_prev + q_curr, q_prev
        den = int(q_prev)
        if den < 1:
            continue
        approx = Fraction(int(p_prev), den)
        if den > max_order:
            return None
        if abs(x - approx) < tol_f / den:
            return den, approx
    return None


def torsion_order(value, max_order=200, tol=1e-6, p=None):
    """Least m <= max_order with m * value in the lattice, with certificate
    q = value / (2*pi*i)^p recognized as a fraction of denominator m."""
    if not isinstance(value, RegulatorValue):
        raise ChowregError("torsion_order expects a RegulatorValue")
    v = value
    if p is None:
        p = v.p
    if v.quadrature_error >= tol / (2 * max_order):
        raise PrecisionError(
            "torsion recognition needs quadrature error below "
            f"{tol / (2 * max_order):.3g}, have {v.quadrature_error:.3g}; "
            "raise the working precision")
    q = v.q_value()
    if abs(q.imag) > tol:
        return TorsionResult(order=None, certificate=None,
                             residual=float(abs(q.imag)))
    x = _fraction_from_real(q.real)
    hit = _cf_minimal_denominator(x, max_order, tol)
    if hit is None:
        return TorsionResult(order=None, certificate=None, residual=float("nan"))
    den, approx = hit
    return TorsionResult(order=den, certificate=approx,
                         residual=float(abs(x - approx)))

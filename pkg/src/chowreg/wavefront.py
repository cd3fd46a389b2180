"""Perturbed branch-cut geometry on parametrized curves.

For a curve component t -> (f_1(t), ..., f_n(t)) and phases (eps_1, ..., eps_n),
the cut locus of coordinate i is {t : arg f_i(t) = pi - eps_i}.  Each locus is
traced as |f_i| level sets: for log-spaced radii r we solve f_i(t) = r *
exp(i(pi - eps_i)) and join solutions by nearest-neighbor continuation, giving
one oriented path per branch, running from a pole of f_i (r -> oo) to a zero
(r -> 0).  Pairwise intersections of loci are refined by a two-dimensional
Newton iteration on the two argument conditions; their sign is the sign of the
crossing derivative of arg f_j along the oriented path.

Admissibility packages the proper-intersection requirements: every coordinate
traces without hitting a critical value, cut crossings are transverse, no
parameter satisfies three argument conditions at once, facet parameters stay
off the first cut, and path endpoints stay off the other cuts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field

import mpmath as mp

from .errors import ChowregError, ConvergenceError, ScheduleError
from .funcfield import INF, RFEvaluator
from .numeric import ComplexApprox, workprec

TRACE_GRID_DEFAULT = 560
SIGMA_SPAN_DEFAULT = 56.0


@dataclass(frozen=True)
class PhaseSchedule:
    """Phases (eps_1, ..., eps_n) controlling all branch cuts.

    Construction is permissive (diagnostic schedules with zero or equal phases
    are allowed); ``is_b_nested`` reports whether the strict nesting
    inequalities eps_1 < bound, eps_{k+1} < exp(-1/eps_k) hold.
    """

    eps_bound: object
    phases: tuple

    def __post_init__(self):
        object.__setattr__(self, "phases", tuple(mp.mpf(p) for p in self.phases))
        object.__setattr__(self, "eps_bound", mp.mpf(self.eps_bound))
        for p in self.phases:
            if p < 0:
                raise ChowregError("phases must be nonnegative")

    @property
    def n(self):
        return len(self.phases)

    def is_b_nested(self):
        if not self.phases:
            return True
        if not (0 < self.phases[0] < self.eps_bound):
            return False
        for k in range(len(self.phases) - 1):
            nxt = self.phases[k + 1]
            if nxt <= 0:
                return False
            # compare via logs: log(eps_{k+1}) < -1/eps_k
            if not (mp.log(nxt) < -1 / self.phases[k]):
                return False
        return True

    def describe(self):
        return [mp.nstr(p, 12) for p in self.phases]


def make_schedule(eps_bound, n, lam, precision_bits=None):
    """Nested schedule eps_1 = lam*bound, eps_{k+1} = lam*exp(-1/eps_k).

    The recursion collapses doubly-exponentially; when the next phase would
    need an exponent beyond any sane representation the construction fails
    loudly rather than producing zeros.
    """
    if precision_bits is None:
        precision_bits = mp.mp.prec
    eps_bound = mp.mpf(eps_bound)
    lam = mp.mpf(lam)
    if not (0 < lam < 1):
        raise ChowregError("lambda must lie in (0, 1)")
    if eps_bound <= 0 or n < 1:
        raise ChowregError("need eps_bound > 0 and n >= 1")
    with workprec(precision_bits):
        phases = [lam * eps_bound]
        for _ in range(n - 1):
            prev = phases[-1]
            inv = 1 / prev
            # exp(-inv) has a binary exponent of about -inv/log(2); keep the
            # exponent integer itself representable in sane memory
            if mp.log(inv, 2) > mp.mpf(2) ** 20:
                raise ScheduleError(
                    "schedule underflow: exp(-1/eps) needs an exponent beyond "
                    "any usable representation; use a larger lambda*eps or "
                    "higher precision"
                )
            phases.append(lam * mp.exp(-inv))
        return PhaseSchedule(eps_bound, tuple(phases))


@dataclass
class TracedPath:
    """One branch of a cut locus, oriented pole -> zero (radius decreasing).

    ``sigmas`` are log-radii in decreasing order; ``points`` the corresponding
    parameter values.  ``point_at`` re-solves the defining equation at any
    log-radius by warm-started Newton, so downstream quadrature can sample the
    exact path rather than interpolating.
    """

    coord_index: int
    phase: object
    evaluator: RFEvaluator
    sigmas: list
    points: list
    arg_residuals: list
    pole: object
    zero: object
    branch_id: int = 0
    _direction: object = dataclass_field(default=None, repr=False)

    def __post_init__(self):
        if self._direction is None:
            self._direction = mp.e ** (1j * (mp.pi - mp.mpf(self.phase)))

    @property
    def sigma_hi(self):
        return self.sigmas[0]

    @property
    def sigma_lo(self):
        return self.sigmas[-1]

    def radius_at(self, k):
        return mp.e ** self.sigmas[k]

    def _nearest_index(self, sigma):
        lo, hi = 0, len(self.sigmas) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.sigmas[mid] >= sigma:
                lo = mid
            else:
                hi = mid
        return lo if abs(self.sigmas[lo] - sigma) <= abs(self.sigmas[hi] - sigma) else hi

    def _newton_to(self, t, sigma, tol):
        w = (mp.e ** mp.mpf(sigma)) * self._direction
        for _ in range(60):
            res = self.evaluator.residual(t, w)
            if res < tol:
                return t
            t = self.evaluator.newton_step(t, w)
        raise ConvergenceError(
            f"path refinement stalled at log-radius {float(sigma):.4f}"
        )

    def point_at(self, sigma, tol=None):
        """Solve f(t) = e^sigma * e^(i(pi-phase)) on this branch."""
        if tol is None:
            tol = mp.mpf(2) ** (12 - mp.mp.prec)
        sigma = mp.mpf(sigma)
        if sigma > self.sigmas[0] or sigma < self.sigmas[-1]:
            # march beyond the traced range in bounded steps to stay on branch
            edge = 0 if sigma > self.sigmas[0] else len(self.sigmas) - 1
            t = self.points[edge]
            s = self.sigmas[edge]
            step = mp.mpf("0.5") * (1 if sigma > s else -1)
            while abs(sigma - s) > mp.mpf("0.5"):
                s += step
                t = self._newton_to(t, s, tol)
            return self._newton_to(t, sigma, tol)
        k = self._nearest_index(sigma)
        return self._newton_to(self.points[k], sigma, tol)


def _chordal(a, b):
    if a is None or b is None:
        return float("inf")
    return float(abs(a - b) / mp.sqrt((1 + abs(a) ** 2) * (1 + abs(b) ** 2)))


def _chordal_to_location(t, location):
    if location is INF:
        return float(1 / mp.sqrt(1 + abs(t) ** 2))
    if isinstance(location, ComplexApprox):
        return _chordal(t, location.value)
    from .field import embed

    return _chordal(t, embed(location, mp.mp.prec).value)


def _match_nearest(points, candidates):
    """Assign each point the nearest candidate; small sets, brute force on
    conflicts."""
    if len(candidates) <= 1:
        return [0] * len(points)
    choice = []
    for t in points:
        dists = [_chordal(t, c) for c in candidates]
        choice.append(dists.index(min(dists)))
    return choice


def trace_wavefront(component, coord_index, phase, grid=None,
                    precision_bits=None, sigma_span=None):
    """Trace all branches of {t : arg f_i(t) = pi - phase}.

    Returns one TracedPath per branch (deg of f_i as a map P^1 -> P^1 in
    total), each oriented pole -> zero.  A critical value of f_i on the ray
    (two branches colliding) raises ScheduleError naming the radius.
    """
    if precision_bits is None:
        precision_bits = mp.mp.prec
    if grid is None:
        grid = TRACE_GRID_DEFAULT
    if sigma_span is None:
        sigma_span = SIGMA_SPAN_DEFAULT
    f = component.coords[coord_index - 1]
    if f.is_constant():
        raise ChowregError("cannot trace a constant coordinate")
    with workprec(precision_bits):
        ev = RFEvaluator(f, precision_bits)
        d = f.degree_map
        direction = mp.e ** (1j * (mp.pi - mp.mpf(phase)))
        sigma_hi = mp.mpf(sigma_span)
        sigma_lo = -mp.mpf(sigma_span)
        steps = int(grid)
        h = (sigma_hi - sigma_lo) / steps
        tol = mp.mpf(2) ** (16 - precision_bits)
        collision_tol = mp.mpf(2) ** (-precision_bits // 2)

        def w_at(sigma):
            return (mp.e ** sigma) * direction

        def full_solve(sigma):
            w = w_at(sigma)
            coeffs_asc = list(ev.nc) + [mp.mpc(0)] * (d + 1 - len(ev.nc))
            dco = list(ev.dc) + [mp.mpc(0)] * (d + 1 - len(ev.dc))
            poly = [a - w * b for a, b in zip(coeffs_asc, dco)]
            # the leading coefficient cancels only when w hits the value of f
            # at infinity; compare against its forming terms, not the rest
            lead_scale = abs(coeffs_asc[-1]) + abs(w) * abs(dco[-1])
            if abs(poly[-1]) < lead_scale * mp.mpf(2) ** (-precision_bits // 2):
                return None  # degree drop; caller jitters sigma
            last_exc = None
            for steps, extra in ((120, precision_bits // 2),
                                 (600, precision_bits),
                                 (2400, 2 * precision_bits)):
                try:
                    return mp.polyroots(list(reversed(poly)), maxsteps=steps,
                                        extraprec=extra)
                except mp.libmp.NoConvergence as exc:
                    last_exc = exc
            raise ConvergenceError(
                f"seed root solve failed: {last_exc}") from last_exc

        # seed at the largest radius, jittering past degree-drop radii
        sigma0 = sigma_hi
        roots = None
        for _ in range(6):
            roots = full_solve(sigma0)
            if roots is not None:
                break
            sigma0 += h / 7
        if roots is None:
            raise ScheduleError("could not seed the trace: persistent degree drop")

        branches = [[(sigma0, r)] for r in roots]
        current = list(roots)
        sigma = sigma0
        while sigma > sigma_lo + h / 2:
            sigma = sigma - h
            w = w_at(sigma)
            new_pts = []
            ok = True
            for t in current:
                try:
                    tn = t
                    for _ in range(40):
                        if ev.residual(tn, w) < tol:
                            break
                        tn = ev.newton_step(tn, w)
                    else:
                        ok = False
                    new_pts.append(tn)
                except ZeroDivisionError:
                    ok = False
                    new_pts.append(t)
            # detect collisions / lost branches
            if ok and d > 1:
                for a in range(d):
                    for b in range(a + 1, d):
                        if abs(new_pts[a] - new_pts[b]) < collision_tol * (
                            1 + abs(new_pts[a])
                        ):
                            ok = False
            if not ok:
                solved = full_solve(sigma)
                if solved is None:
                    raise ScheduleError(
                        "non-generic phase: degree drop while tracing at radius "
                        f"{mp.nstr(mp.e ** sigma, 8)}"
                    )
                assign = _match_nearest(current, solved)
                if len(set(assign)) != len(current):
                    raise ScheduleError(
                        "non-generic phase: branch collision (critical value on "
                        f"the cut ray) near radius {mp.nstr(mp.e ** sigma, 8)}"
                    )
                new_pts = [solved[k] for k in assign]
            current = new_pts
            for k in range(d):
                branches[k].append((sigma, current[k]))

        zeros = [p for p in f.divisor() if p.multiplicity > 0]
        poles = [p for p in f.divisor() if p.multiplicity < 0]
        paths = []
        for bid, samples in enumerate(branches):
            sigmas = [s for s, _ in samples]
            points = [t for _, t in samples]
            residuals = []
            for s, t in samples:
                val = ev.value(t)
                residuals.append(float(abs(mp.arg(-val * mp.e ** (1j * mp.mpf(phase))))
                                       if val != 0 else mp.inf))
            pole_idx = min(range(len(poles)),
                           key=lambda k: _chordal_to_location(points[0], poles[k].location))
            zero_idx = min(range(len(zeros)),
                           key=lambda k: _chordal_to_location(points[-1], zeros[k].location))
            paths.append(
                TracedPath(
                    coord_index=coord_index,
                    phase=mp.mpf(phase),
                    evaluator=ev,
                    sigmas=sigmas,
                    points=points,
                    arg_residuals=residuals,
                    pole=poles[pole_idx],
                    zero=zeros[zero_idx],
                    branch_id=bid,
                )
            )
        return paths


@dataclass
class WavefrontIntersection:
    """A transverse crossing of two cut loci on the curve."""

    t: ComplexApprox
    pair: tuple
    sign: int
    host_path: TracedPath
    sigma: object
    transversality: float


def _principal_arg_residual(value, phase):
    """arg(e^{i phase} value) - pi, wrapped to (-pi, pi]."""
    return mp.arg(-value * mp.e ** (1j * mp.mpf(phase)))


def find_pair_intersections(component, paths_i, j, phase_j,
                            precision_bits=None, transversality_rel=None):
    """Crossings of the traced coordinate-i loci with the coordinate-j cut.

    The crossing sign is the sign of d(arg f_j)/du along the pole -> zero
    orientation of the host path; tangential crossings raise ScheduleError.
    """
    if precision_bits is None:
        precision_bits = mp.mp.prec
    if transversality_rel is None:
        transversality_rel = float(mp.mpf(2) ** (-precision_bits // 3))
    out = []
    if component.coords[j - 1].is_constant():
        return out
    with workprec(precision_bits):
        f_j_ev = RFEvaluator(component.coords[j - 1], precision_bits)
        for path in paths_i:
            i = path.coord_index
            f_i_ev = path.evaluator
            rot = mp.e ** (1j * mp.mpf(phase_j))
            ims = []
            res = []
            for t in path.points:
                v = f_j_ev.value(t) * rot
                ims.append(v.imag)
                res.append(v.real)
            for k in range(len(ims) - 1):
                a, b = ims[k], ims[k + 1]
                if a == 0 and b == 0:
                    continue
                if (a > 0 and b > 0) or (a < 0 and b < 0):
                    continue
                if res[k] > 0 and res[k + 1] > 0:
                    continue  # positive-axis crossing, not the cut
                t_c = _refine_crossing(path, f_i_ev, f_j_ev, path.phase, phase_j,
                                       path.sigmas[k], path.sigmas[k + 1],
                                       precision_bits)
                if t_c is None:
                    continue
                g_i = f_i_ev.dlog(t_c)
                g_j = f_j_ev.dlog(t_c)
                cross = (mp.conj(g_i) * g_j).imag
                rel = float(abs(cross) / (abs(g_i) * abs(g_j)))
                if rel < transversality_rel:
                    raise ScheduleError(
                        "non-generic schedule: tangential cut crossing near "
                        f"t = {mp.nstr(t_c, 10)}"
                    )
                sign = -1 if cross > 0 else 1
                dup = False
                for prev in out:
                    if prev.host_path is path and abs(prev.t.value - t_c) < mp.mpf(2) ** (
                        -precision_bits // 2
                    ) * (1 + abs(t_c)):
                        dup = True
                        break
                if dup:
                    continue
                fi_val = f_i_ev.value(t_c)
                out.append(
                    WavefrontIntersection(
                        t=ComplexApprox(t_c, float(mp.mpf(2) ** (24 - precision_bits)
                                                   * (1 + abs(t_c)))),
                        pair=(i, j),
                        sign=sign,
                        host_path=path,
                        sigma=mp.log(abs(fi_val)),
                        transversality=rel,
                    )
                )
    return out


def _refine_crossing(path, f_i_ev, f_j_ev, phase_i, phase_j, s_hi, s_lo,
                     precision_bits):
    """Bisection bracket then 2d Newton on both argument conditions."""
    rot_j = mp.e ** (1j * mp.mpf(phase_j))

    def im_j(sigma):
        return (f_j_ev.value(path.point_at(sigma)) * rot_j).imag

    a, b = s_hi, s_lo
    fa = im_j(a)
    for _ in range(14):
        m = (a + b) / 2
        fm = im_j(m)
        if fa * fm <= 0:
            b = m
        else:
            a, fa = m, fm
    t = path.point_at((a + b) / 2)
    tol = mp.mpf(2) ** (16 - precision_bits)
    for _ in range(80):
        r1 = _principal_arg_residual(f_i_ev.value(t), phase_i)
        r2 = _principal_arg_residual(f_j_ev.value(t), phase_j)
        if abs(r1) < tol and abs(r2) < tol:
            break
        g1 = f_i_ev.dlog(t)
        g2 = f_j_ev.dlog(t)
        det = g1.imag * g2.real - g1.real * g2.imag
        if det == 0:
            return None
        dx = (-r1 * g2.real + r2 * g1.real) / det
        dy = (-g1.imag * r2 + g2.imag * r1) / det
        t = t + mp.mpc(dx, dy)
    else:
        raise ConvergenceError("crossing refinement did not converge")
    v = f_j_ev.value(t) * rot_j
    if v.real >= 0:
        return None
    return t


@dataclass
class AdmissibilityFailure:
    kind: str
    component: int
    detail: str
    witness: object = None

    def to_dict(self):
        w = None
        if self.witness is not None:
            v = self.witness.value if isinstance(self.witness, ComplexApprox) else self.witness
            w = {"re": mp.nstr(mp.mpc(v).real, 20), "im": mp.nstr(mp.mpc(v).imag, 20)}
        return {"kind": self.kind, "component": self.component,
                "detail": self.detail, "witness": w}


@dataclass
class AdmissibilityReport:
    ok: bool
    failures: list
    schedule: PhaseSchedule
    warnings: list = dataclass_field(default_factory=list)
    traced: dict = dataclass_field(default_factory=dict, repr=False)

    def to_dict(self):
        return {
            "ok": self.ok,
            "phases": self.schedule.describe(),
            "failures": [f.to_dict() for f in self.failures],
            "warnings": [f.to_dict() for f in self.warnings],
        }


def _on_cut_margin(value, phase):
    """Angular distance of a nonzero finite value from the phase's cut ray."""
    v = value.value if isinstance(value, ComplexApprox) else mp.mpc(value)
    return float(abs(mp.arg(-v * mp.e ** (1j * mp.mpf(phase)))))


def _coordinate_value_at(component, j, location):
    """Coordinate j at a divisor location; returns mpc, INF, or exact zero."""
    from .field import CyclotomicNumber, embed

    f = component.coords[j - 1]
    v = f.eval(location if not isinstance(location, ComplexApprox) else location)
    if v is INF:
        return INF
    if isinstance(v, CyclotomicNumber):
        if v.is_zero():
            return 0
        return embed(v, mp.mp.prec).value
    return v.value if isinstance(v, ComplexApprox) else v


def admissible(Z, schedule, precision_bits=None, tol=1e-9, trace_grid=None):
    """Check proper position of a curve precycle with respect to the perturbed
    cuts of a specific schedule.

    Verifies, per component: (a) every nonconstant coordinate traces its cut
    without critical points (constants must sit off their cut); (b) crossings
    of the first two cut loci are transverse; (c) no crossing also satisfies a
    later coordinate's argument condition (no triple point); (d) parameters
    where any coordinate hits 0 or oo stay off the first cut, and endpoints of
    the first locus stay off the second cut (keeping the crossing set away
    from chain boundaries).  An endpoint sitting on a cut beyond the second is
    outside every nested cut-prefix condition, so it is reported as a warning
    rather than a failure.
    """
    if precision_bits is None:
        precision_bits = mp.mp.prec
    if not Z.is_curve_level:
        raise ChowregError("admissibility applies to curve-level precycles")
    if schedule.n != Z.n:
        raise ChowregError(f"schedule has {schedule.n} phases, cycle needs {Z.n}")
    failures = []
    warnings = []
    traced = {}
    cut_tol = max(float(tol), 1e-12)
    with workprec(precision_bits):
        for ci, comp in enumerate(Z.components):
            # (a) every coordinate's own cut is traceable / off-cut constants
            comp_paths = {}
            for i in range(1, Z.n + 1):
                f = comp.coords[i - 1]
                phase = schedule.phases[i - 1]
                if f.is_constant():
                    from .field import embed

                    cval = embed(f.constant_value(), precision_bits)
                    if _on_cut_margin(cval, phase) < cut_tol:
                        failures.append(AdmissibilityFailure(
                            "constant-on-cut", ci,
                            f"coordinate {i} is constant on its cut",
                            cval))
                    continue
                try:
                    grid = trace_grid if (trace_grid and i == 1) else (
                        trace_grid or (TRACE_GRID_DEFAULT if i == 1 else 240))
                    comp_paths[i] = trace_wavefront(
                        comp, i, phase, grid=grid, precision_bits=precision_bits)
                except (ScheduleError, ConvergenceError) as exc:
                    failures.append(AdmissibilityFailure(
                        "trace", ci, f"coordinate {i}: {exc}"))
            traced[ci] = comp_paths

            # facet parameters: where any coordinate hits 0 or oo
            facet_params = []
            for k in range(1, Z.n + 1):
                fk = comp.coords[k - 1]
                if fk.is_constant():
                    continue
                for pt in fk.divisor():
                    facet_params.append((k, pt))

            # (c) facet parameters keep off the first cut
            f1 = comp.coords[0]
            if not f1.is_constant():
                for k, pt in facet_params:
                    if k == 1:
                        continue
                    v = _coordinate_value_at(comp, 1, pt.location)
                    if v is INF or v == 0:
                        continue
                    margin = _on_cut_margin(v, schedule.phases[0])
                    if margin < cut_tol:
                        failures.append(AdmissibilityFailure(
                            "face-on-cut", ci,
                            f"coordinate {k} facet parameter lies on the first cut "
                            f"(margin {margin:.2e})",
                            pt.location if isinstance(pt.location, ComplexApprox)
                            else None))

                # (d) endpoints of the first locus avoid the later cuts
                for pt in f1.divisor():
                    for k in range(2, Z.n + 1):
                        v = _coordinate_value_at(comp, k, pt.location)
                        if v is INF or v == 0:
                            continue
                        margin = _on_cut_margin(v, schedule.phases[k - 1])
                        if margin < cut_tol:
                            entry = AdmissibilityFailure(
                                "endpoint-on-cut", ci,
                                f"endpoint of the first cut locus lies on cut {k} "
                                f"(margin {margin:.2e})",
                                pt.location if isinstance(pt.location, ComplexApprox)
                                else None)
                            (failures if k == 2 else warnings).append(entry)

            # (b) + (c) crossings: transversality and no triple points
            if Z.n >= 2 and 1 in comp_paths:
                try:
                    crossings = find_pair_intersections(
                        comp, comp_paths[1], 2, schedule.phases[1],
                        precision_bits=precision_bits)
                except ScheduleError as exc:
                    failures.append(AdmissibilityFailure("tangency", ci, str(exc)))
                    crossings = []
                for c in crossings:
                    for k in range(3, Z.n + 1):
                        fk = comp.coords[k - 1]
                        if fk.is_constant():
                            vk = fk.constant_value()
                            from .field import embed

                            v = embed(vk, precision_bits).value
                        else:
                            v = RFEvaluator(fk, precision_bits).value(c.t.value)
                        if v == 0:
                            continue
                        margin = _on_cut_margin(v, schedule.phases[k - 1])
                        if margin < cut_tol:
                            failures.append(AdmissibilityFailure(
                                "triple", ci,
                                f"triple point: cuts 1,2,{k} meet "
                                f"(margin {margin:.2e})",
                                c.t))
    return AdmissibilityReport(ok=not failures, failures=failures,
                               schedule=schedule, warnings=warnings,
                               traced=traced)


def search_schedule(Z, eps_start=0.3, attempts=12, seed=0, precision_bits=None,
                    tol=1e-9):
    """Find a nested schedule at which the cycle is admissible.

    Deterministic for a fixed seed: a fixed ladder of lambda values and
    shrinking bounds, with seed-derived jitter on later attempts.  Exhausting
    the attempt budget raises ScheduleError carrying the last failure report;
    failure does not certify inadmissibility.
    """
    if precision_bits is None:
        precision_bits = mp.mp.prec
    base_lams = [0.5, 0.35, 0.65, 0.8, 0.25, 0.45, 0.7, 0.3, 0.55, 0.6]
    rng_state = (seed * 2654435761 + 1013904223) % (2 ** 32)
    lams = []
    for k in range(attempts):
        if k < len(base_lams):
            lams.append(base_lams[k])
        else:
            rng_state = (rng_state * 1664525 + 1013904223) % (2 ** 32)
            lams.append(0.2 + 0.6 * (rng_state / 2 ** 32))
    last_report = None
    eps = mp.mpf(eps_start)
    with workprec(precision_bits):
        for k, lam in enumerate(lams):
            try:
                s = make_schedule(eps, Z.n, lam, precision_bits)
            except ScheduleError:
                eps = eps * mp.mpf("0.6")
                continue
            report = admissible(Z, s, precision_bits=precision_bits, tol=tol)
            if report.ok:
                return s
            last_report = report
            if (k + 1) % 3 == 0:
                eps = eps * mp.mpf("0.6")
    detail = ""
    if last_report is not None:
        detail = "; last failures: " + "; ".join(
            f.kind + " (component " + str(f.component) + ")"
            for f in last_report.failures[:4])
    raise ScheduleError(
        f"no admissible schedule found in {attempts} attempts from bound "
        f"{eps_start}{detail}")

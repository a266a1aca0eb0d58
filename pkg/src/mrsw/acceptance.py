"""Acceptance criteria as callable checks returning PASS/FAIL records."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cubic import solve_energy_cubic_array
from .diagnostics import total_energy
from .experiments import ExperimentConfig, convergence_study, divergence_measure, equilibrium_errors
from .oracles import bisection_depth, random_cubic_draws
from .presets import build_problem
from .reconstruct import minmod, weno_z_value
from .timeint import integrate, ssp_rk3_step

WB_TOL = 1e-12
DIV_TOL = 1e-13


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} [{self.number}] {self.name}: {self.detail}"


def _fmt(d: dict) -> str:
    return ", ".join(f"{k}={v:.3e}" for k, v in d.items())


def _wb_run(example, variant="WB", t_end=5.0):
    p = build_problem(example, variant=variant, t_end=t_end)
    res = integrate(p.W0, p.rhs_and_dt, p.t_end)
    return equilibrium_errors(res.w, p.reference)


def criterion_1() -> CriterionResult:
    err = _wb_run(1)
    return CriterionResult(1, "1-D WB, constant f", max(err.values()) < WB_TOL, _fmt(err))


def criterion_2() -> CriterionResult:
    err = _wb_run(2)
    return CriterionResult(2, "1-D WB, beta-plane", max(err.values()) < WB_TOL, _fmt(err))


def criterion_3() -> CriterionResult:
    err = _wb_run(1, variant="NWB")
    ok = 1e-5 <= err["h"] <= 1e-1
    return CriterionResult(3, "NWB contrast", ok, f"h error {err['h']:.3e} in [1e-5, 1e-1]")


def criterion_4(meshes=(1000, 2000, 4000, 8000)) -> CriterionResult:
    table = convergence_study(ExperimentConfig(example=3, t_end=5.0), meshes)
    flat = [r for rs in table.rates.values() for r in rs]
    ok = all(1.7 <= r <= 2.7 for r in flat)
    detail = "; ".join(f"{f}: " + ",".join(f"{r:.2f}" for r in rs) for f, rs in table.rates.items())
    return CriterionResult(4, "Example 3 convergence rates", ok, detail)


def criterion_5() -> CriterionResult:
    p = build_problem(5, (100, 100), t_end=5.0)
    errs = {}

    def cb(t, w, step):
        if t in (1.0, 5.0):
            errs[t] = max(equilibrium_errors(w, p.reference).values())

    integrate(p.W0, p.rhs_and_dt, 5.0, stop_times=(1.0,), callback=cb)
    ok = len(errs) == 2 and max(errs.values()) < WB_TOL
    return CriterionResult(5, "2-D WB", ok, ", ".join(f"t={t:g}: {e:.3e}" for t, e in errs.items()))


def criterion_6(mesh=(100, 100), t_end=2.0) -> CriterionResult:
    worst = {}
    for ex in (6, 7, 8):
        p = build_problem(ex, mesh, t_end=t_end, snapshot_times=())
        peak = [0.0]

        def cb(t, w, step, peak=peak):
            peak[0] = max(peak[0], divergence_measure(w))

        integrate(p.W0, p.rhs_and_dt, t_end, callback=cb)
        worst[f"ex{ex}"] = peak[0]
    return CriterionResult(6, "2-D discrete divergence", max(worst.values()) <= DIV_TOL, _fmt(worst))


def _example4_run(mesh=4000, t_end=5.0):
    p = build_problem(4, mesh, t_end=t_end)
    e0 = total_energy(p.W0, p.topo.centers, p.cfg.g, p.grid.dy)
    ratios, div = [], [0.0]

    def cb(t, w, step):
        ratios.append(total_energy(w, p.topo.centers, p.cfg.g, p.grid.dy) / e0)
        div[0] = max(div[0], divergence_measure(w))

    integrate(p.W0, p.rhs_and_dt, t_end, callback=cb)
    return ratios, div[0]


def criterion_7(mesh3=1000, mesh4=4000) -> CriterionResult:
    p = build_problem(3, mesh3, t_end=5.0)
    div3 = [0.0]

    def cb(t, w, step):
        div3[0] = max(div3[0], divergence_measure(w))

    integrate(p.W0, p.rhs_and_dt, 5.0, callback=cb)
    _, div4 = _example4_run(mesh4)
    ok = max(div3[0], div4) <= DIV_TOL
    return CriterionResult(7, "1-D divergence constraint", ok, f"ex3={div3[0]:.3e}, ex4={div4:.3e}")


def criterion_8(mesh=4000) -> CriterionResult:
    ratios, _ = _example4_run(mesh)
    peak, final = max(ratios), ratios[-1]
    ok = peak <= 1 + 1e-10 and final < 1 - 1e-4
    return CriterionResult(8, "Example 4 energy", ok,
                           f"max E/E0 - 1 = {peak - 1:.3e}, E(5)/E0 - 1 = {final - 1:.3e}")


def criterion_9() -> CriterionResult:
    p = build_problem(1, 100, t_end=1.0, perturb=True)
    res = integrate(p.W0, p.rhs_and_dt, 1.0)
    dev = float(np.max(np.abs(res.w[0] - p.reference[0])))
    return CriterionResult(9, "perturbed equilibrium", dev <= 5e-3, f"max|h - h_eq| = {dev:.3e}")


def _cubic_oracle_agreement(n: int, seed: int = 1) -> tuple[int, int]:
    draws = random_cubic_draws(n, seed)
    h, fb = solve_energy_cubic_array(*draws, return_fallback=True)
    bad = 0
    for i in range(n):
        ho, fo = bisection_depth(*(d[i] for d in draws))
        if fo != fb[i] or abs(ho - h[i]) > 1e-10 * abs(ho):
            bad += 1
    return bad, int(fb.sum())


def _weno_quadratic_ulps(trials: int = 2000, seed: int = 2) -> float:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        c0, c1, c2 = rng.uniform(-1, 1, 3)
        # Point samples of c0 + c1 y + c2 y^2 at y = -2..2; target y = 1/2.
        fc = [Fraction(c) for c in (c0, c1, c2)]
        samples = [fc[0] + fc[1] * k + fc[2] * k * k for k in range(-2, 3)]
        exact = fc[0] + fc[1] / 2 + fc[2] / 4
        got = weno_z_value(np.array([float(a) for a in samples]))
        worst = max(worst, abs(got - float(exact)) / np.spacing(max(abs(float(exact)), 1.0)))
    return worst


def _rk3_polynomial_error(z: float = -0.1) -> float:
    w = np.array([1.0])
    got = ssp_rk3_step(w, lambda x: z * x, 1.0)[0]
    return abs(got - (1 + z + z * z / 2 + z**3 / 6))


def _minmod_laws(trials: int = 2000, seed: int = 3) -> bool:
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        v = rng.normal(size=3)
        m = minmod(v)
        if np.all(v > 0):
            ok = m == v.min()
        elif np.all(v < 0):
            ok = m == v.max()
        else:
            ok = m == 0.0
        if not ok or minmod(-v) != -m:
            return False
    return True


def _determinism() -> bool:
    runs = []
    for _ in range(2):
        p = build_problem(3, 200, t_end=1.0)
        runs.append(integrate(p.W0, p.rhs_and_dt, 1.0).w.tobytes())
    return runs[0] == runs[1]


def criterion_10(cubic_draws: int = 10**4) -> CriterionResult:
    bad, fallbacks = _cubic_oracle_agreement(cubic_draws)
    ulps = _weno_quadratic_ulps()
    rk = _rk3_polynomial_error()
    mm = _minmod_laws()
    det = _determinism()
    ok = bad == 0 and ulps <= 10 and rk <= 1e-15 and mm and det
    detail = (f"cubic mismatches {bad}/{cubic_draws} ({fallbacks} fallbacks); WENO {ulps:.1f} ulp; "
              f"RK3 {rk:.1e}; minmod {'ok' if mm else 'bad'}; determinism {'ok' if det else 'bad'}")
    return CriterionResult(10, "property suites", ok, detail)


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
            6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10}


def run_all(numbers=None, echo=print) -> list[CriterionResult]:
    """Run the selected criteria (all by default), echoing one line per criterion."""
    results = []
    for n in numbers or CRITERIA:
        res = CRITERIA[n]()
        if echo is not None:
            echo(res.line())
        results.append(res)
    return results


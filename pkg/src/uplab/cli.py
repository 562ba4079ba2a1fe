"""Experiment orchestration: parse a JSON config, run a registered
experiment over the library, write CSV/JSON artifacts plus a manifest with
content hashes.

Determinism contract: a fixed (config, seed) pair produces byte-identical
artifacts; floats are serialized with repr-faithful %.17g formatting and all
parallel sweeps collect results in declared order before the single writer
emits anything.

Exit codes: 0 all certificates pass; 1 configuration error; 2 a certificate
failed (the failing certificate is named on stderr and in the manifest).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .errors import UplabError


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


class ArtifactWriter:
    def __init__(self, out_dir: Path):
        self.out_dir = out_dir
        self.files = []

    def csv(self, name: str, header, rows):
        path = self.out_dir / name
        lines = [",".join(header)]
        count = 0
        for row in rows:
            lines.append(",".join(_fmt(v) for v in row))
            count += 1
        data = ("\n".join(lines) + "\n").encode("utf-8")
        path.write_bytes(data)
        self.files.append({
            "path": name,
            "sha256": hashlib.sha256(data).hexdigest(),
            "rows": count,
        })

    def json(self, name: str, payload):
        path = self.out_dir / name
        data = (json.dumps(payload, indent=2, sort_keys=True) + "\n").encode("utf-8")
        path.write_bytes(data)
        self.files.append({
            "path": name,
            "sha256": hashlib.sha256(data).hexdigest(),
            "rows": 0,
        })

    def manifest(self, name: str, ok: bool, failed: str | None):
        payload = {"name": name, "files": self.files}
        if not ok:
            payload["failed_certificate"] = failed
        data = (json.dumps(payload, indent=2, sort_keys=True) + "\n").encode("utf-8")
        (self.out_dir / "manifest.json").write_bytes(data)


# ---------------------------------------------------------------------------
# Experiments.  Each runner returns (ok, failed_certificate_name_or_None).


def _exp_kernels(params, seed, w: ArtifactWriter):
    from .circle_core import kernel

    orders = params.get("orders", [2**k for k in range(4, 13)])
    m = int(params.get("grid", 2**14))
    rows = []
    for n in orders:
        d = kernel("dirichlet", int(n), m)
        rows.append((int(n), float(np.mean(np.abs(d.values.real)))))
    w.csv("kernel_l1.csv", ("N", "l1_norm"), rows)
    ratios = [r[1] / math.log(r[0]) for r in rows]
    w.json("kernel_fit.json", {"ratio_first": ratios[0], "ratio_last": ratios[-1]})
    return True, None


def _exp_kernel_profile(params, seed, w: ArtifactWriter):
    from .circle_core import kernel, dft_coeffs

    kind = params.get("kind", "fejer")
    order = params.get("order", 16)
    m = int(params.get("grid", 1024))
    g = kernel(kind, order, m)
    win = dft_coeffs(g, min(2 * int(order) + 2, m // 2 - 1))
    w.csv(f"kernel_{kind}.csv", ("index", "re", "im"),
          [(int(n), c.real, c.imag) for n, c in zip(win.indices, win.coeffs)])
    return True, None


def _exp_wiener(params, seed, w: ArtifactWriter):
    from .circle_core import CoeffWindow, wiener_invert

    coeffs = params.get("coeffs", [2.0, 1.0])
    lo = int(params.get("lo", 0))
    tol = float(params.get("tol", 1e-8))
    f = CoeffWindow(lo, lo + len(coeffs) - 1, np.array(coeffs, dtype=complex))
    g, cert = wiener_invert(f, tol)
    w.csv("wiener_inverse.csv", ("index", "re", "im"),
          [(int(n), c.real, c.imag) for n, c in zip(g.indices, g.coeffs)])
    w.json("wiener_certificate.json", {
        "epsilon": cert.epsilon, "terms": cert.terms_used,
        "residual_l1": cert.residual_l1,
    })
    return cert.residual_l1 <= tol, None if cert.residual_l1 <= tol else "wiener residual"


def _exp_riesz(params, seed, w: ArtifactWriter):
    from .riesz_lacunary import LacunarySpec, RieszSpec, riesz_partial, block_mass

    freqs = params.get("freqs", [3**j for j in range(1, 6)])
    amps = params.get("amps", [1.0] * len(freqs))
    spec = LacunarySpec(tuple(freqs))
    r = RieszSpec(spec, tuple(amps), params.get("kind", "R1"))
    n = len(amps)
    window = riesz_partial(r, n)
    nz = [(int(i), c.real, c.imag) for i, c in zip(window.indices, window.coeffs)
          if c != 0]
    w.csv("riesz_coeffs.csv", ("frequency", "re", "im"), nz)
    w.csv("riesz_blocks.csv", ("j", "block_mass"),
          [(j, block_mass(r, j, n)) for j in range(1, n + 1)])
    return True, None


def _exp_szego(params, seed, w: ArtifactWriter):
    from .circle_core import GridFunctionT
    from .measures_sets import SampledMeasure
    from .szego_opuc import szego_distance

    m = int(params.get("grid", 4096))
    t = 2 * np.pi * np.arange(m) / m
    dens = GridFunctionT.from_real(2.0 + np.cos(t))
    mu = SampledMeasure(density=dens, positive=True)
    target = float(np.exp(np.mean(np.log(dens.values.real))))
    degrees = params.get("degrees", [2, 4, 8, 16, 32, 64, 128])
    with ThreadPoolExecutor() as pool:
        dists = list(pool.map(lambda n: szego_distance(mu, int(n)), degrees))
    rows = [(int(n), d, target, d - target) for n, d in zip(degrees, dists)]
    w.csv("szego.csv", ("n", "distance", "target", "gap"), rows)
    ok = rows[-1][3] <= 0.02 * target
    return ok, None if ok else "szego distance gap"


def _exp_kolmogorov(params, seed, w: ArtifactWriter):
    from .circle_core import GridFunctionT
    from .measures_sets import SampledMeasure
    from .szego_opuc import kolmogorov_distance

    m = int(params.get("grid", 4096))
    t = 2 * np.pi * np.arange(m) / m
    dens = GridFunctionT.from_real(2.0 + np.cos(t))
    mu = SampledMeasure(density=dens, positive=True)
    target = 1.0 / float(np.mean(1.0 / dens.values.real))
    degrees = params.get("degrees", [2, 4, 8, 16, 32, 64])
    rows = []
    for n in degrees:
        d = kolmogorov_distance(mu, int(n))
        rows.append((int(n), d, target, d - target))
    w.csv("kolmogorov.csv", ("n", "distance", "target", "gap"), rows)
    ok = rows[-1][3] <= 0.02 * target
    return ok, None if ok else "kolmogorov distance gap"


def _exp_localization(params, seed, w: ArtifactWriter):
    from .measures_sets import IntervalSet
    from .uniqueness_pairs import LocalizationSpec, loc_operator_norm

    half_width = float(params.get("half_width", 16.0))
    size = int(params.get("size", 1024))
    widths = params.get("widths", [0.25, 0.5, 1.0, 2.0])
    rows = []
    for we in widths:
        e_set = IntervalSet("line", ((-we / 2, we / 2),))
        spec = LocalizationSpec(e_set, e_set, half_width, size)
        est = loc_operator_norm(spec)
        me, mf = spec.measures()
        c = 1.0 / (1.0 - est.value) if est.value < 1 else math.inf
        rows.append((me, mf, est.value, c))
    w.csv("localization.csv", ("measure_E", "measure_F", "norm", "C"), rows)
    ok = all(r[2] < 1.0 for r in rows)
    return ok, None if ok else "operator norm below one"


def _exp_prescription(params, seed, w: ArtifactWriter):
    from .fields import LineField
    from .measures_sets import IntervalSet
    from .uniqueness_pairs import (LocalizationSpec, prescribe,
                                   prescription_residuals)

    half_width = float(params.get("half_width", 16.0))
    size = int(params.get("size", 2048))
    e_set = IntervalSet("line", ((-2.0, -1.0),))
    f_set = IntervalSet("line", ((3.0, 4.0),))
    spec = LocalizationSpec(e_set, f_set, half_width, size)
    xs = -half_width + (2 * half_width / size) * np.arange(size)
    g = LineField(half_width, np.exp(-((xs + 1.5) ** 2)).astype(complex))
    xi = (math.pi / half_width) * np.arange(-size // 2, size // 2)
    h = LineField(math.pi / (2 * half_width / size),
                  np.exp(-2 * (xi - 3.5) ** 2).astype(complex))
    f = prescribe(g, h, spec, tol=1e-9)
    re_, rf_ = prescription_residuals(f, g, h, spec)
    w.json("prescription.json", {"residual_E": re_, "residual_F": rf_})
    ok = max(re_, rf_) < 1e-6
    return ok, None if ok else "prescription residual"


def _exp_ls(params, seed, w: ArtifactWriter):
    from .measures_sets import IntervalSet
    from .uniqueness_pairs import _line_complement, ls_inequality_check

    half_width = float(params.get("half_width", 64.0))
    e_comp = IntervalSet("line", tuple(
        (k, k + 0.25) for k in range(-int(half_width), int(half_width))))
    e_set = _line_complement(e_comp, -half_width, half_width)
    rep = ls_inequality_check(e_set, float(params.get("bandwidth", 1.0)),
                              half_width=half_width,
                              size=int(params.get("size", 4096)),
                              trials=int(params.get("trials", 50)), seed=seed)
    w.json("ls_report.json", {
        "gamma": rep.gamma, "proof_bound": rep.proof_bound,
        "empirical_constant": rep.empirical_constant, "trials": rep.trials,
        "worst_witness": [list(pair) for pair in rep.worst_witness],
    })
    ok = rep.empirical_constant <= rep.proof_bound
    return ok, None if ok else "LS empirical constant"


def _exp_uncertainty(params, seed, w: ArtifactWriter):
    from .fields import LineField
    from .uniqueness_pairs import poisson_summation_check, uncertainty_checks

    half_width = float(params.get("half_width", 32.0))
    size = int(params.get("size", 2048))
    xs = -half_width + (2 * half_width / size) * np.arange(size)
    f = LineField(half_width,
                  ((1 / np.pi) ** 0.25 * np.exp(-(xs**2) / 2)).astype(complex))
    rep = uncertainty_checks(f)
    left, right, _tails = poisson_summation_check(
        LineField(half_width, np.exp(-(xs**2) / 2).astype(complex)),
        f_callable=lambda x: math.exp(-(x**2) / 2))
    w.json("uncertainty.json", {
        "heisenberg_product": rep.heisenberg_product,
        "entropy_sum": rep.entropy_sum,
        "entropy_bound": rep.entropy_bound,
        "poisson_left": abs(left), "poisson_right": abs(right),
    })
    ok = (rep.heisenberg_product >= 1.0 - 1e-6
          and rep.entropy_sum >= rep.entropy_bound - 1e-6
          and abs(left - right) < 1e-10)
    return ok, None if ok else "uncertainty contracts"


def _exp_muntz(params, seed, w: ArtifactWriter):
    from .line_logint import muntz_distance

    kappa = float(params.get("kappa", 0.5))
    n_max = int(params.get("n_max", 10))
    rows = []
    for n in range(1, n_max + 1):
        rows.append((n, muntz_distance(list(range(1, n + 1)), kappa)))
    w.csv("muntz.csv", ("n", "muntz_distance"), rows)
    ok = all(b[1] <= a[1] + 1e-15 for a, b in zip(rows, rows[1:]))
    return ok, None if ok else "muntz monotonicity"


def _exp_beurling(params, seed, w: ArtifactWriter):
    from .fields import LineField
    from .line_logint import beurling_vmu_stat

    half_width = float(params.get("half_width", 64.0))
    size = int(params.get("size", 4096))
    xs = -half_width + (2 * half_width / size) * np.arange(size)
    dens = LineField(half_width, np.exp(-np.abs(xs)).astype(complex))
    rep = beurling_vmu_stat((), dens, t_max=half_width / 2)
    ts = np.linspace(0.1, half_width / 2, 64)
    rows = []
    for t in ts:
        v = float(dens.step * np.sum(np.abs(dens.values)[xs >= t]))
        rows.append((t, v, math.log(max(v, 1e-300)) / (1 + t * t)))
    w.csv("beurling_vmu.csv", ("t", "V_mu", "log_term"), rows)
    w.json("beurling_class.json", {
        "value": rep.value, "classification": rep.classification,
        "divergent": rep.flagged_divergent,
    })
    return True, None


def _exp_im(params, seed, w: ArtifactWriter):
    from .im_construct import im_iterate, majorant_validate
    from .errors import NotRegular

    kind = params.get("majorant", "sqrt")
    n_w = int(params.get("majorant_length", 4097))
    if kind == "sqrt":
        seq = np.maximum(np.arange(n_w), 1) ** -0.5
    elif kind == "exponential":
        seq = np.exp(-np.arange(n_w, dtype=float))
    else:
        seq = np.array(params["majorant_values"], dtype=float)
    try:
        major = majorant_validate(seq)
    except NotRegular as exc:
        w.json("im_failure.json", {"error": "NotRegular", "detail": str(exc)})
        return False, "NotRegular"
    steps = int(params.get("steps", 2))
    states = im_iterate(major, steps, seed=seed)
    for st in states[1:]:
        spec = np.fft.fft(st.f.values.real) / st.f.sample_count
        ns = np.arange(1, 257)
        w.csv(f"im_level_{st.level}.csv", ("n", "abs_coeff", "bound"),
              [(int(n), float(abs(spec[n])),
                float((1 - 2.0 ** -st.level) * major.at(n))) for n in ns])
    w.json("im_states.json", [{
        "level": st.level, "support_measure": st.support_measure,
        "mean": st.mean, "worst_majorant_ratio": st.worst_majorant_ratio,
        "epsilon": st.epsilon_used, "delta": st.delta_used,
    } for st in states])
    ok = all(st.worst_majorant_ratio <= st.majorant_slack + 1e-9
             for st in states[1:])
    return ok, None if ok else "IM majorant bound"


def _exp_bm_envelope(params, seed, w: ArtifactWriter):
    from .bm_multiplier import BMProblem, subharmonic_envelope

    prob = BMProblem.from_weight(lambda x: 1.0 / (1.0 + x**2),
                                 float(params.get("type", 3.0)))
    env = subharmonic_envelope(prob, float(params.get("slope", 2.5)))
    hx = env.xs[1] - env.xs[0]
    hy = env.ys[1] - env.ys[0]
    rows = []
    for j, y in enumerate(env.ys):
        for i, x in enumerate(env.xs):
            if j % 4 or i % 4:
                continue
            if 0 < j < len(env.ys) - 1 and 0 < i < len(env.xs) - 1:
                lap = ((env.values[j, i + 1] - 2 * env.values[j, i]
                        + env.values[j, i - 1]) / hx**2
                       + (env.values[j + 1, i] - 2 * env.values[j, i]
                          + env.values[j - 1, i]) / hy**2)
            else:
                lap = 0.0
            rows.append((x, y, env.values[j, i], lap))
    w.csv("bm_envelope.csv", ("x", "y", "u", "laplacian"), rows)
    w.json("bm_envelope_cert.json", {
        "laplacian_margin": env.laplacian_margin,
        "axis_mass_min": env.axis_mass_min,
        "growth_margin": env.growth_margin,
    })
    ok = env.laplacian_margin >= -1e-6 and env.axis_mass_min >= 0
    return ok, None if ok else "envelope Laplacian"


def _exp_bm_multiplier(params, seed, w: ArtifactWriter):
    from .bm_multiplier import BMProblem, conjugate_multiplier

    a = float(params.get("bandwidth", 1.0))
    c0 = math.pi * a / 4.0
    prob = BMProblem.from_weight(
        lambda x: np.exp(-c0 * (np.pi / 2 + np.arctan(x))), a,
        half_width=32.0, size=2048)
    m, cert = conjugate_multiplier(prob, a, node_budget=1 << 18)
    rows = [(x, float(np.log(max(v, 1e-300))),
             4 * a + cert.c2 + cert.c3 * math.log(1 + abs(x)))
            for x, v in zip(m.xs[::16], np.abs(m.values.real)[::16])]
    w.csv("bm_multiplier.csv", ("x", "log_m", "bound"), rows)
    w.json("bm_multiplier_cert.json", {
        "dyakonov_deviation": cert.dyakonov_deviation,
        "log_m_bound_margin": cert.log_m_bound_margin,
        "sq_integrability_margin": cert.sq_integrability_margin,
    })
    ok = (cert.u_range_ok and cert.log_m_bound_margin <= 0
          and cert.dyakonov_deviation < 1e-3)
    return ok, None if ok else "multiplier certificates"


def _exp_mild_bm(params, seed, w: ArtifactWriter):
    from .bm_multiplier import mild_bm

    a = float(params.get("bandwidth", 1.0))
    g, cert = mild_bm(lambda x: 1.0 / (1.0 + x**2), a,
                      size=int(params.get("size", 2048)))
    w.json("mild_bm_cert.json", {
        "margin": cert.margin, "support_exact": cert.support_exact,
        "two_route_gap": cert.two_route_gap,
    })
    ok = cert.support_exact and cert.margin >= 1.0
    return ok, None if ok else "mild BM certificate"


def _exp_bm_density(params, seed, w: ArtifactWriter):
    from .bm_multiplier import bm_density

    bound = int(params.get("bound", 10000))
    wit = bm_density(np.arange(-bound, bound + 1))
    rows = [(iv[0][0], iv[0][1], iv[1], iv[2]) for iv in wit.per_interval]
    w.csv("bm_density.csv", ("a", "b", "count", "density"), rows)
    w.json("bm_density.json", {
        "density": wit.density,
        "score_partials": list(wit.score_partials),
    })
    ok = wit.density >= 0.95
    return ok, None if ok else "density certificate"


def _exp_cantor(params, seed, w: ArtifactWriter):
    from .measures_sets import CantorSpec, bc_entropy, cantor_set

    depth = int(params.get("depth", 8))
    alphas = params.get("alphas", [2.0 ** (-(n + 2)) for n in range(depth)])
    e_set = cantor_set(CantorSpec(tuple(alphas), depth))
    w.json("cantor.json", {
        "intervals": json.loads(e_set.to_json()),
        "entropy": bc_entropy(e_set),
        "total_length": e_set.total_length(),
    })
    return True, None


EXPERIMENTS = {
    "kernels": (_exp_kernels, "circle_core", "Dirichlet L1 growth sweep"),
    "kernel_profile": (_exp_kernel_profile, "circle_core", "kernel coefficient window"),
    "wiener": (_exp_wiener, "circle_core", "Wiener algebra inversion"),
    "riesz": (_exp_riesz, "riesz_lacunary", "Riesz product coefficients and blocks"),
    "szego": (_exp_szego, "szego_opuc", "Szego distance convergence"),
    "kolmogorov": (_exp_kolmogorov, "szego_opuc", "Kolmogorov distance convergence"),
    "localization": (_exp_localization, "uniqueness_pairs", "localization norm sweep"),
    "prescription": (_exp_prescription, "uniqueness_pairs", "prescription residuals"),
    "ls": (_exp_ls, "uniqueness_pairs", "Logvinenko-Sereda inequality"),
    "uncertainty": (_exp_uncertainty, "uniqueness_pairs", "Heisenberg/entropic/Poisson checks"),
    "muntz": (_exp_muntz, "line_logint", "Muntz distance decay"),
    "beurling": (_exp_beurling, "line_logint", "Beurling V_mu statistic"),
    "im": (_exp_im, "im_construct", "Ivashev-Musatov iteration"),
    "bm_envelope": (_exp_bm_envelope, "bm_multiplier", "subharmonic envelope slices"),
    "bm_multiplier": (_exp_bm_multiplier, "bm_multiplier", "conjugate multiplier profile"),
    "mild_bm": (_exp_mild_bm, "bm_multiplier", "mild BM autocorrelation"),
    "bm_density": (_exp_bm_density, "bm_multiplier", "BM density search"),
    "cantor": (_exp_cantor, "measures_sets", "Cantor set and entropy"),
}


def catalog() -> dict:
    return {
        name: {"module": module, "description": desc,
               "parameters": "flat JSON map; see README"}
        for name, (_fn, module, desc) in sorted(EXPERIMENTS.items())
    }


def run_config(config_path: str, out_dir: str | None, seed: int | None) -> int:
    try:
        config = json.loads(Path(config_path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    name = config.get("name")
    if name not in EXPERIMENTS:
        print(f"config error: unknown experiment {name!r}", file=sys.stderr)
        return 1
    params = config.get("parameters", {})
    if not isinstance(params, dict):
        print("config error: parameters must be a flat object", file=sys.stderr)
        return 1
    run_seed = seed if seed is not None else int(config.get("seed", 0))
    out = Path(out_dir or config.get("output", "out"))
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"config error: unwritable output: {exc}", file=sys.stderr)
        return 1
    writer = ArtifactWriter(out)
    fn = EXPERIMENTS[name][0]
    try:
        ok, failed = fn(params, run_seed, writer)
    except UplabError as exc:
        writer.json("failure.json",
                    {"error": type(exc).__name__, "detail": str(exc)})
        writer.manifest(name, False, type(exc).__name__)
        print(f"certificate failure: {type(exc).__name__}: {exc}",
              file=sys.stderr)
        return 2
    writer.manifest(name, ok, failed)
    if not ok:
        print(f"certificate failure: {failed}", file=sys.stderr)
        return 2
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="uplab",
        description="uncertainty-principle laboratory experiment runner")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run a configured experiment")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--out", default=None)
    p_run.add_argument("--seed", type=int, default=None)
    sub.add_parser("list", help="print the experiment catalog as JSON")
    args = parser.parse_args(argv)
    if args.command == "list":
        print(json.dumps(catalog(), indent=2, sort_keys=True))
        return 0
    return run_config(args.config, args.out, args.seed)


if __name__ == "__main__":
    sys.exit(main())

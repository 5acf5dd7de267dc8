"""Time the mod-2 sweep kernels under both backends.

    python3 benchmarks/bench_kernels.py [--repeat N] [--scale K]

``--scale`` widens every default range by that factor so the compiled
kernel has enough work to show its advantage.
"""
import argparse
import json
import time

from fswcalc.steenrod import DEFAULT_RANGES, _kernels_py

try:
    from fswcalc.steenrod import _ckernels
except ImportError:  # extension not built
    _ckernels = None

SWEEPS = {
    "vzero": ("vzero_sweep", ("u", "j")),
    "recur5": ("recur5_sweep", ("u", "v", "j")),
    "recur3": ("recur3_sweep", ("k", "l", "m", "d", "ap")),
}


def _args(name, scale):
    rng = DEFAULT_RANGES[name]
    out = []
    for key in SWEEPS[name][1]:
        lo, hi = rng[key]
        if lo < 0:
            out += [lo * scale, hi * scale]
        else:
            out += [lo, hi * scale]
    # recur3 takes a single offset bound for a'
    return out[:-2] + [out[-1]] if name == "recur3" else out


def best_of(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        res = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, res


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--scale", type=int, default=1)
    opts = ap.parse_args()
    rows = []
    for name, (fname, _) in SWEEPS.items():
        args = _args(name, opts.scale)
        t_py, r_py = best_of(getattr(_kernels_py, fname), args, opts.repeat)
        row = {"sweep": name, "cases": len(r_py), "python_s": round(t_py, 4)}
        if _ckernels is not None:
            t_c, r_c = best_of(getattr(_ckernels, fname), args, opts.repeat)
            row.update(cython_s=round(t_c, 4), speedup=round(t_py / t_c, 1),
                       identical=bytes(r_py) == bytes(r_c))
        rows.append(row)
    print(json.dumps(rows, indent=2))


if __name__ == "__main__":
    main()

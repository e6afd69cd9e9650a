"""Compare the compiled closure kernels against the pure-Python fallback.

Run:  python3 benchmarks/bench_kernels.py

The python numbers come from a subprocess with NILPROB_FORCE_PY=1 so both
backends are measured through the same import path.
"""

import json
import os
import subprocess
import sys
import time

WORKLOADS = [
    ("sym:7 closure", "sym:7"),
    ("pgl2:13 closure", "pgl2:13"),
    ("sym:8 closure", "sym:8"),
    ("m11 file load", "file:m11"),
]

SNIPPET = """
import json, sys, time
from nilprob.catalog import group_from_spec
from nilprob.kernels import BACKEND

spec = sys.argv[1]
t0 = time.perf_counter()
G = group_from_spec(spec)
order = G.order
build = time.perf_counter() - t0

t0 = time.perf_counter()
orders = G.tables.orders
scan = time.perf_counter() - t0

print(json.dumps({
    "backend": BACKEND,
    "order": order,
    "build_s": build,
    "order_scan_s": scan,
    "max_element_order": int(orders.max()),
}))
"""


def run_one(spec: str, force_py: bool) -> dict:
    env = dict(os.environ)
    if force_py:
        env["NILPROB_FORCE_PY"] = "1"
    else:
        env.pop("NILPROB_FORCE_PY", None)
    out = subprocess.run(
        [sys.executable, "-c", SNIPPET, spec],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    return json.loads(out.stdout)


def main() -> None:
    print(f"{'workload':24} {'backend':10} {'order':>9} {'build':>9} {'scan':>9}")
    for name, spec in WORKLOADS:
        for force_py in (False, True):
            r = run_one(spec, force_py)
            print(
                f"{name:24} {r['backend']:10} {r['order']:>9} "
                f"{r['build_s']:>8.3f}s {r['order_scan_s']:>8.3f}s"
            )
    print()
    print("note: identical results are asserted by the test suite; this only")
    print("reports wall-clock differences on this machine.")


if __name__ == "__main__":
    start = time.perf_counter()
    main()
    print(f"total {time.perf_counter() - start:.1f}s")

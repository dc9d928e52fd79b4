"""Benchmark the compiled interpreter kernel against the pure-Python fallback.

The package builds ``confdebug.interp._kernel`` as a C extension when
possible and falls back to interpreting the same source file otherwise.
This script loads both variants side by side and times them on a
loop-heavy program.

Usage: python3 benchmarks/bench_kernel.py [--repeats N] [--loops N]
"""
import argparse
import importlib.util
import statistics
import sys
import timeit
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from confdebug.interp import _kernel as default_kernel  # noqa: E402
from confdebug.lang import parse_program  # noqa: E402

WORKLOAD = """
option Fast bool default false;
option Mode enum {a, b, c} default a;

fn main() {
  repeat {loops} {
    helper(7);
  }
  if (option(Fast)) {
    work(1);
  }
}

fn helper(n) {
  total = 0;
  repeat n {
    total = total + 2;
    work(3);
  }
  if (total > 5 && option(Mode) == :b) {
    work(total);
  }
  return total;
}
"""


def load_pure_kernel():
    """Import the kernel from its source file, bypassing the extension."""
    source = Path(default_kernel.__file__).with_suffix(".py")
    if source.name != "_kernel.py":  # running from the built extension
        source = source.parent / "_kernel.py"
    # keep the package-qualified name so the module's relative imports work
    spec = importlib.util.spec_from_file_location(
        "confdebug.interp._kernel_pure", source)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    assert not module.COMPILED
    return module


def bench(kernel, program, config, repeats):
    times = timeit.repeat(lambda: kernel.run(program, config),
                          number=1, repeat=repeats)
    return min(times), statistics.median(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=7)
    parser.add_argument("--loops", type=int, default=3000,
                        help="outer loop iterations of the workload")
    args = parser.parse_args()

    program = parse_program(WORKLOAD.replace("{loops}", str(args.loops)))
    config = {"Fast": True, "Mode": "b"}
    pure = load_pure_kernel()

    variants = [("pure", pure)]
    if default_kernel.COMPILED:
        variants.insert(0, ("compiled", default_kernel))
    else:
        print("note: extension not built; timing the fallback only")

    results = {}
    for name, kernel in variants:
        total, _tree, _cov = kernel.run(program, config)
        best, median = bench(kernel, program, config, args.repeats)
        results[name] = best
        print(f"{name:>9}: best {best * 1e3:8.2f} ms   "
              f"median {median * 1e3:8.2f} ms   (cost {total} units)")

    if "compiled" in results:
        print(f"  speedup: {results['pure'] / results['compiled']:.2f}x")


if __name__ == "__main__":
    main()

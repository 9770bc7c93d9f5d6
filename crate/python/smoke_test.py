"""Import the compiled extension and exercise each binding once.

Build first with `cargo build -p ross-spectra-py --release` (or without
`--release`); the script copies the shared library next to a temporary
module path under the name Python expects and imports it from there.
"""

import importlib.util
import json
import math
import shutil
import sys
import sysconfig
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def find_library() -> Path:
    names = ["libross_spectra_py.so", "libross_spectra_py.dylib", "ross_spectra_py.dll"]
    for profile in ("release", "debug"):
        for name in names:
            candidate = ROOT / "target" / profile / name
            if candidate.exists():
                return candidate
    sys.exit("extension not built: run `cargo build -p ross-spectra-py --release` first")


def load(lib: Path, workdir: Path):
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    target = workdir / f"ross_spectra_py{suffix}"
    shutil.copy(lib, target)
    spec = importlib.util.spec_from_file_location("ross_spectra_py", target)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def main() -> None:
    with tempfile.TemporaryDirectory() as tmp:
        rs = load(find_library(), Path(tmp))
        print(f"ross_spectra_py {rs.__version__}, B2 = {rs.B2_FORM}")

        # closed form on H^3
        l1 = rs.lambda1_ball(1, 3, 1.5)
        assert abs(l1 - (1 + math.pi**2 / 1.5**2)) < 1e-8, l1

        l1, l2 = rs.lambda1_ball(2, 2, 1.0), rs.lambda2_ball(2, 2, 1.0)
        assert 0 < l1 < l2 < rs.lambda02_ball(2, 2, 1.0)
        assert abs(rs.radius_for_lambda1(2, 2, l1) - 1.0) < 1e-8
        assert rs.lambda1_ball(2, 2, math.pi / 4, compact=True) > 0

        rows = rs.gap_table(4, 2, 0.5, 3.0, 0.5)
        assert len(rows) == 6 and all(r["margin"] >= -1e-8 for r in rows)

        a1, a2 = rs.annulus_eigenvalues(2, 2, 0.2, 1.0)
        assert a1 > l1 and a2 > a1
        report = rs.ppw_annulus(2, 2, 0.2, 1.0)
        assert report["passed"], report

        assert abs(rs.find_root_r2() - 1.35) < 0.05
        assert abs(rs.find_root_r1(2, 2) - 1.57) < 0.05
        coeffs = rs.series_coefficients("hh2_a1b1_cross_a3b3", 3)
        assert coeffs[1] == "76832/45" and coeffs[3] == "-551936/135", coeffs

        code, out, err = rs.run_cli(["verify-gap", "--k", "2", "--n", "2", "--r-min", "0.5", "--r-max", "1", "--step", "0.5"])
        assert code == 0, err
        assert json.loads(out)["passed"]
        code, out, err = rs.run_cli(["ball-spectrum", "--k", "2", "--n", "2", "--radius", "-1"])
        assert code == 2 and not out and err

        try:
            rs.lambda1_ball(3, 2, 1.0)
        except ValueError as e:
            print(f"rejected (3, 2): {e}")
        else:
            raise AssertionError("expected ValueError for k = 3")

    print("smoke test passed")


if __name__ == "__main__":
    main()

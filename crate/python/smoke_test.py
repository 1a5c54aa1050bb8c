"""Smoke test for the shearsense Python module.

Build and install first:  pip install --no-build-isolation -e crates/python
"""

import json
import math

import numpy as np

import shearsense as ss


def main():
    print("shearsense", ss.__version__)

    disk = ss.PhantomSpec.preset("disk", 64)
    u = np.array(disk.render())
    assert u.shape == (64, 64)
    assert u[32, 32] == 1.0 and u[0, 0] == 0.0
    spec = ss.PhantomSpec.from_json(disk.to_json())
    assert np.array_equal(np.array(spec.render()), u)

    bank = ss.FilterBank(64, 2)
    assert len(bank) == len(bank.shears()) == 6
    back = np.array(bank.analysis_synthesis(u.tolist()))
    assert np.abs(back - u).max() < 1e-8

    c = ss.awt_forward(u.tolist(), 4)
    assert abs(np.linalg.norm(c) - np.linalg.norm(u)) < 1e-9
    assert np.abs(np.array(ss.awt_inverse(c, 4)) - u).max() < 1e-10

    assert [s[2] for s in ss.shear_set(2)] == [-0.5, 0.0, 0.5]

    mask = ss.SamplingMask.directional(64, 2, 0.2, seed=3)
    assert mask.kept_fraction() >= 0.2
    assert ss.SamplingMask.from_json(mask.to_json()).cardinality() == len(mask)
    assert len(ss.SamplingMask.radial(512, 0.05)) == 13107

    meas = ss.measure(u.tolist(), mask)
    img, report = ss.reconstruct(meas, "shear08", truth=u.tolist())
    report = json.loads(report)
    print("shear08 at 20%%: %.2f dB, %d/%d shears converged"
          % (report["psnr_db"], report["converged_shears"], len(report["shears"])))
    assert report["psnr_db"] > 15

    full = ss.measure(u.tolist(), ss.SamplingMask.radial(64, 1.0))
    img, report = ss.reconstruct(full, "wave01", truth=u.tolist())
    psnr = json.loads(report)["psnr_db"]
    assert psnr == "inf" or psnr >= 60

    csv = ss.compare(u.tolist(), ["wave01"], [0.3], [0, 1])
    assert csv == ss.compare(u.tolist(), ["wave01"], [0.3], [0, 1])
    assert len(csv.strip().splitlines()) == 3

    # 1-sparse recovery from a partial DFT
    n, rows = 16, [0, 3, 5, 9, 12, 14]
    a = [[complex(math.cos(-2 * math.pi * r * k / n), math.sin(-2 * math.pi * r * k / n)) / math.sqrt(n)
          for k in range(n)] for r in rows]
    x0 = np.zeros(n, complex)
    x0[7] = 1.5
    y = (np.array(a) @ x0).tolist()
    x, converged, _ = ss.basis_pursuit(a, y)
    assert converged and np.abs(np.array(x) - x0).max() < 1e-6

    eye = np.eye(8, dtype=complex).tolist()
    assert ss.rip_constant(eye, 2) < 1e-12

    try:
        ss.reconstruct(meas, "shear07")
    except ValueError as e:
        assert "wave01" in str(e)
    else:
        raise AssertionError("bad scheme accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()

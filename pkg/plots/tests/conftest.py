import subprocess

import pytest

FIGURE_IDS = (
    "VarianceVsSpectrum",
    "FullSupportGC",
    "TraceSeries",
    "GC025",
    "FOAR025",
    "ZeroLength",
    "DiagSweepGC",
    "DiagSweepFOAR",
    "VarianceTimeSeries",
    "StateSolutions",
)


@pytest.fixture(scope="session")
def bundle_root(tmp_path_factory):
    """Complete bundle set for all ten figure ids, generated through the
    covprop CLI (the only interface this package consumes)."""
    root = tmp_path_factory.mktemp("bundles")
    for fid in FIGURE_IDS:
        subprocess.run(
            ["covprop", "run", "--figure", fid, "--n", "64", "--out", str(root)],
            check=True, capture_output=True)
    return root

import pytest

from qadlab.cli import main as qadlab_main


@pytest.fixture(scope="session")
def small_outputs(tmp_path_factory):
    """Small sweep + capacity record files produced through the
    experiment CLI (the renderer's only interface to the physics)."""
    out = tmp_path_factory.mktemp("records")
    assert qadlab_main(["qudit-sweep", "--dims", "2,3,4", "--trials", "12",
                        "--seed", "5", "--out", str(out)]) == 0
    assert qadlab_main(["capacity-scan", "--dims", "2,4", "--trials", "15",
                        "--seed", "5", "--out", str(out)]) == 0
    return out

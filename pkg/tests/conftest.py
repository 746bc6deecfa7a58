import numpy as np
import pytest

from wavelasso.bench.images import camera_image
from wavelasso.bench.pgm import write_pgm


@pytest.fixture(scope="session")
def camera128():
    """The benchmark photo at 128x128, float in [0, 1]."""
    pytest.importorskip("skimage")
    return camera_image(128)


@pytest.fixture(scope="session")
def camera_pgm(tmp_path_factory, camera128):
    """Path of the 128x128 benchmark photo written as an 8-bit PGM."""
    path = tmp_path_factory.mktemp("images") / "camera.pgm"
    write_pgm(path, camera128)
    return path


@pytest.fixture()
def rng():
    return np.random.default_rng(20240613)

import numpy as np
import pytest
from skimage import data


@pytest.fixture(scope="session")
def natural_images():
    """Bundled natural photographs with correlated RGB channels."""
    return {
        "astronaut": data.astronaut(),
        "chelsea": data.chelsea(),
        "coffee": data.coffee(),
        "immunohistochemistry": data.immunohistochemistry(),
    }


@pytest.fixture(scope="session")
def natural_crop(natural_images):
    """A small crop for fast end-to-end runs."""
    return natural_images["astronaut"][96:176, 192:304]


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def random_image(rng, h, w):
    return rng.integers(0, 256, size=(h, w, 3), dtype=np.uint8)

import pytest

from singergq.gf import get_field


@pytest.fixture(params=[(2, 1), (3, 1), (2, 2), (2, 3), (3, 2), (5, 1), (2, 5), (7, 1)], ids=lambda ph: f"GF({ph[0]}^{ph[1]})")
def field(request):
    return get_field(*request.param)

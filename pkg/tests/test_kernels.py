import os
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from k3mirror import _pykernels, kernels

BACKENDS = kernels.backends()


def test_pure_backend_always_available():
    assert BACKENDS[0] is _pykernels


def test_env_forces_pure_backend():
    env = dict(os.environ, K3MIRROR_PURE="1")
    out = subprocess.run([sys.executable, "-c", "from k3mirror import kernels; print(kernels.BACKEND)"],
                         capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "python"


@st.composite
def qv_inputs(draw):
    n = draw(st.integers(1, 4))
    orders = [draw(st.integers(1, 6)) for _ in range(n)]
    N = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            N[i][j] = N[j][i] = draw(st.integers(-50, 50))
    return orders, N, draw(st.integers(1, 200))


@given(qv_inputs())
def test_q_values_agree(args):
    orders, N, mod = args
    ref = _pykernels.q_values(orders, N, mod)
    for mod_impl in BACKENDS:
        assert mod_impl.q_values(orders, N, mod) == ref


def test_q_values_reference():
    # x^T N x with N = [[2]] on Z/3
    assert _pykernels.q_values([3], [[2]], 100) == [0, 2, 8]


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.BACKEND)
def test_iso_backtrack_contract(impl):
    elems = [(0,), (1,), (2,)]
    N2 = [[1]]
    assert impl.iso_backtrack([[1, 2]], elems, N2, 3, [[]], 100) == [1]
    assert impl.iso_backtrack([[]], elems, N2, 3, [[]], 100) is None
    with pytest.raises(kernels.BudgetExceeded):
        impl.iso_backtrack([[1, 2], [1, 2]], elems, N2, 3, [[], [7]], 1)
    seen = []

    def prefix_ok(chosen, m):
        seen.append(m)
        return chosen[0] == 2

    assert impl.iso_backtrack([[1, 2]], elems, N2, 3, [[]], 100, prefix_ok) == [2]
    assert seen == [1, 1]

import os
import subprocess
import sys

import pytest
from hypothesis import given

from rasq import _accel, _kernel_py
from rasq.oracle import _Compiled

from .strategies import programs

compiled = pytest.importorskip("rasq._kernel")


@given(programs(atoms=6, max_rules=10))
def test_compiled_kernel_matches_python(p):
    c = _Compiled(p)
    args = c.args()
    for k in (compiled, _kernel_py):
        assert k.answer_set_masks(*args, c.head_mask) == _kernel_py.answer_set_masks(*args, c.head_mask)
    assert compiled.cs_subsets(*args, c.head_mask) == _kernel_py.cs_subsets(*args, c.head_mask)
    assert compiled.gamma_images(*args, c.n, c.head_mask) == _kernel_py.gamma_images(*args, c.n, c.head_mask)
    for m in (0, c.head_mask):
        assert compiled.gl_least_model(*args, m) == _kernel_py.gl_least_model(*args, m)
        assert compiled.gamma_hat_mask(*args, c.n, m) == _kernel_py.gamma_hat_mask(*args, c.n, m)
        assert compiled.is_cs_mask(*args, m) == _kernel_py.is_cs_mask(*args, m)


def test_compiled_kernel_is_selected_by_default():
    if os.environ.get("RASQ_PURE_PYTHON", "") not in ("", "0"):
        pytest.skip("pure Python forced by the environment")
    assert _accel.COMPILED and _accel.kernel is compiled


def test_pure_python_fallback_can_be_forced():
    code = "from rasq import _accel; print(_accel.COMPILED, _accel.kernel.__name__)"
    env = dict(os.environ, RASQ_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["False", "rasq._kernel_py"]

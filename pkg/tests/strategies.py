"""Hypothesis strategies shared by the property tests."""
import numpy as np
from hypothesis import strategies as st

from wehrl.spin import Rotation, state_from_amplitudes

finite = st.floats(-3.0, 3.0, allow_nan=False, allow_infinity=False)


@st.composite
def states(draw, min_tj=1, max_tj=6):
    tj = draw(st.integers(min_tj, max_tj))
    re = draw(st.lists(finite, min_size=tj + 1, max_size=tj + 1))
    im = draw(st.lists(finite, min_size=tj + 1, max_size=tj + 1))
    a = np.array(re) + 1j * np.array(im)
    if np.linalg.norm(a) < 1e-3:
        a[0] += 1.0
    return state_from_amplitudes(a, normalize=True)


@st.composite
def rotations(draw):
    axis = np.array([draw(finite), draw(finite), draw(finite)])
    if np.linalg.norm(axis) < 1e-3:
        axis = np.array([0.0, 0.0, 1.0])
    angle = draw(st.floats(0.0, 2 * np.pi))
    return Rotation.from_axis_angle(axis, angle)


points = st.tuples(finite, finite).map(lambda t: complex(*t))

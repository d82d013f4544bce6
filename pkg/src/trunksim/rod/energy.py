"""Total potential energy of the discretized rig and its exact gradient.

The energy of a candidate configuration is the sum of, per tube:

* pneumatic work      -p * A_bore * (L - L_0)
* axial elasticity    sum (E*A / (2 ds)) (l_i - ds)^2   (global (E*A/2L_0)(L-L_0)^2
                      at uniform strain; per-segment form regularizes the
                      discrete problem), or the Neo-Hookean variant
* bending             sum (E*I/2) |kb_i|^2 / voronoi_i with the curvature
                      binormal kb = 2 (t_a x t_b) / (1 + t_a . t_b); node 0
                      bends against the fixed shaft direction
* thread bound        w_t * max(0, guide path length - thread length)^2,
                      the guide path being the polyline through the surface
                      points at radius d_o/2 and the twisted azimuths

plus the couplings: gravity (z down), the sleeve penalty tying opposite
nodes to the tapering nominal width, and the connector spacing penalty.

Gradients are produced by automatic differentiation of the same
expression, so they are exact to rounding; the finite-difference check in
the test suite guards the wiring, not the calculus.  States with reversed
segments (t_a . t_b -> -1) produce non-finite energies by design: they
are diverged, not meaningful.
"""

from __future__ import annotations

from dataclasses import replace

import numpy as np

import jax

jax.config.update("jax_enable_x64", True)

import jax.numpy as jnp
from jax import lax

from ..params import ActuatorParams, ControlInput  # noqa: E402
from .state import (
    LEFT,
    RIGHT,
    MaterialParams,
    RigState,
    SolverOptions,
    node_azimuths_rad,
    rig_geometry,
)

__all__ = ["RodModel", "get_model", "total_energy", "energy_terms", "energy_gradient"]

_MODEL_CACHE: dict = {}


def _quat_between(a, b):
    """Minimal rotation quaternion taking unit vector a to b (w, x, y, z)."""
    w = 1.0 + jnp.sum(a * b, axis=-1, keepdims=True)
    q = jnp.concatenate([w, jnp.cross(a, b)], axis=-1)
    return q / jnp.linalg.norm(q, axis=-1, keepdims=True)


def _quat_mul(q2, q1):
    """Composition applying q1 first, then q2."""
    w2, v2 = q2[..., :1], q2[..., 1:]
    w1, v1 = q1[..., :1], q1[..., 1:]
    w = w2 * w1 - jnp.sum(v2 * v1, axis=-1, keepdims=True)
    v = w2 * v1 + w1 * v2 + jnp.cross(v2, v1)
    return jnp.concatenate([w, v], axis=-1)


def _quat_rotate(q, v):
    t = 2.0 * jnp.cross(q[..., 1:], v)
    return v + q[..., :1] * t + jnp.cross(q[..., 1:], t)


def _chain_directors(tangents, d1_base):
    """Parallel-transport the base director along the node-tangent chain.

    The per-step minimal rotations are composed with an associative prefix
    product, which XLA turns into a log-depth tree instead of a sequential
    loop.  Each transported director is re-orthogonalized against its
    tangent to keep the frames orthonormal to rounding.
    """
    steps = _quat_between(tangents[:-1], tangents[1:])
    prefix = lax.associative_scan(lambda a, b: _quat_mul(b, a), steps, axis=0)
    rest = _quat_rotate(prefix, d1_base[None, :])
    rest = rest - jnp.sum(rest * tangents[1:], axis=-1, keepdims=True) * tangents[1:]
    rest = rest / jnp.linalg.norm(rest, axis=-1, keepdims=True)
    return jnp.concatenate([d1_base[None, :], rest], axis=0)


class RodModel:
    """Jitted energy, gradient and diagnostics for one (params, material, opts)."""

    def __init__(self, params: ActuatorParams, material: MaterialParams, opts: SolverOptions):
        self.params = params
        self.material = material
        self.opts = opts
        n = opts.segment_count
        self.n_segments = n
        base, tip, t_base, d1_base = rig_geometry(params)
        self._base = jnp.asarray(base)
        self._t_base = jnp.asarray(t_base)
        self._d1_base = jnp.asarray(d1_base)

        self._ds = params.rest_length / n
        self._ea = material.axial_stiffness(params)
        self._ei = material.bending_stiffness(params)
        self._area = params.cross_section_area
        self._bore = params.bore_area
        self._radius = params.outer_diameter / 2.0
        self._l0 = params.rest_length
        self._node_weight = params.actuation_mass / (2 * (n + 1)) * params.gravity
        self._c10 = material.neo_hookean_c10

        frac = np.linspace(0.0, 1.0, n + 1)
        widths = params.top_shaft_spacing * (1.0 - frac) + params.bottom_shaft_spacing * frac
        self._widths = jnp.asarray(widths)
        trap = np.full(n + 1, self._ds)
        trap[0] *= 0.5
        trap[-1] *= 0.5
        self._sleeve_node_w = jnp.asarray(trap * opts.sleeve_weight)

        voronoi = np.full(n, self._ds)
        voronoi[0] *= 0.5
        self._voronoi = jnp.asarray(voronoi)

        self._energy_fn = jax.jit(self._total)
        self._value_and_grad_fn = jax.jit(jax.value_and_grad(self._total))
        self._hessian_fn = jax.jit(jax.jacfwd(jax.grad(self._total)))
        self._terms_fn = jax.jit(self._terms)

    # ---- control plumbing -------------------------------------------------

    def control_args(self, control: ControlInput):
        """Runtime arguments (pressures, thread lengths, azimuths) for a control."""
        pressures = np.array([control.pressure_left, control.pressure_right])
        lengths = np.array([control.thread_length_left, control.thread_length_right])
        alphas = node_azimuths_rad(control, self.params, self.n_segments)
        return jnp.asarray(pressures), jnp.asarray(lengths), jnp.asarray(alphas)

    def pack(self, positions: np.ndarray) -> np.ndarray:
        """Free coordinates (all nodes but the clamped node 0 of each tube)."""
        return np.asarray(positions)[:, 1:, :].reshape(-1).copy()

    def unpack(self, x: np.ndarray) -> np.ndarray:
        free = np.asarray(x).reshape(2, self.n_segments, 3)
        return np.concatenate([np.asarray(self._base)[:, None, :], free], axis=1)

    # ---- energy assembly ---------------------------------------------------

    def _assemble(self, xfree):
        free = xfree.reshape(2, self.n_segments, 3)
        return jnp.concatenate([self._base[:, None, :], free], axis=1)

    def _tube_quantities(self, pos):
        e = pos[:, 1:] - pos[:, :-1]
        lengths = jnp.linalg.norm(e, axis=-1)
        tangents = e / lengths[..., None]
        return lengths, tangents

    def _node_frames(self, pos, tangents):
        # azimuth sign: positive angles rotate the guide from +y toward +x,
        # the operator's left when standing behind the motor frame; with it,
        # a +/-90 twist pair lays the top guides outward, where the sleeve
        # penalty cancels the transverse components (planar J stays stable)
        t0 = self._t_base[:, None, :]
        mids = tangents[:, :-1] + tangents[:, 1:]
        mids = mids / jnp.linalg.norm(mids, axis=-1, keepdims=True)
        node_t = jnp.concatenate([t0, mids, tangents[:, -1:, :]], axis=1)
        d1 = jax.vmap(_chain_directors)(node_t, self._d1_base)
        d2 = jnp.cross(d1, node_t)
        return node_t, d1, d2

    def _axial_energy(self, lengths):
        if self.opts.axial_model == "neo-hookean":
            lam = lengths / self._ds
            density = self._c10 * (lam**2 + 2.0 / lam - 3.0)
            return jnp.sum(density * self._area * self._ds)
        return jnp.sum(0.5 * self._ea / self._ds * (lengths - self._ds) ** 2)

    def _components(self, xfree, pressures, thread_lengths, alphas):
        pos = self._assemble(xfree)
        lengths, tangents = self._tube_quantities(pos)

        e_axial = self._axial_energy(lengths)
        e_pneumatic = -jnp.sum(pressures * self._bore * (lengths.sum(axis=1) - self._l0))

        t_all = jnp.concatenate([self._t_base[:, None, :], tangents], axis=1)
        ta, tb = t_all[:, :-1], t_all[:, 1:]
        kb = 2.0 * jnp.cross(ta, tb) / (1.0 + jnp.sum(ta * tb, axis=-1))[..., None]
        kb2 = jnp.sum(kb * kb, axis=-1)
        e_bending = jnp.sum(0.5 * self._ei * kb2 / self._voronoi)

        e_gravity = -self._node_weight * jnp.sum(pos[..., 2])

        node_t, d1, d2 = self._node_frames(pos, tangents)
        guide_dir = jnp.cos(alphas)[..., None] * d1 + jnp.sin(alphas)[..., None] * d2
        guides = pos + self._radius * guide_dir
        seg = guides[:, 1:] - guides[:, :-1]
        path = jnp.linalg.norm(seg, axis=-1).sum(axis=1)
        violation = jnp.maximum(path - thread_lengths, 0.0)
        e_thread = jnp.sum(self.opts.thread_weight * violation**2)

        gap = jnp.linalg.norm(pos[LEFT] - pos[RIGHT], axis=-1)
        e_sleeve = jnp.sum(self._sleeve_node_w * (gap - self._widths) ** 2)

        tip_gap = jnp.linalg.norm(pos[LEFT, -1] - pos[RIGHT, -1])
        e_connector = self.opts.connector_weight * (tip_gap - self.params.bottom_shaft_spacing) ** 2

        terms = {
            "pneumatic": e_pneumatic,
            "axial": e_axial,
            "bending": e_bending,
            "gravity": e_gravity,
            "thread_penalty": e_thread,
            "sleeve_penalty": e_sleeve,
            "connector_penalty": e_connector,
        }
        extras = {
            "thread_path_lengths": path,
            "thread_violations": violation,
            "segment_lengths": lengths,
            "curvature_sq": kb2,
            "node_gaps": gap,
        }
        return terms, extras

    def _total(self, xfree, pressures, thread_lengths, alphas):
        terms, _ = self._components(xfree, pressures, thread_lengths, alphas)
        return (
            terms["pneumatic"]
            + terms["axial"]
            + terms["bending"]
            + terms["gravity"]
            + terms["thread_penalty"]
            + terms["sleeve_penalty"]
            + terms["connector_penalty"]
        )

    def _terms(self, xfree, pressures, thread_lengths, alphas):
        terms, extras = self._components(xfree, pressures, thread_lengths, alphas)
        return terms, extras

    # ---- numpy-facing API ----------------------------------------------------

    def energy(self, x, args) -> float:
        return float(self._energy_fn(jnp.asarray(x), *args))

    def value_and_grad(self, x, args):
        v, g = self._value_and_grad_fn(jnp.asarray(x), *args)
        return float(v), np.asarray(g)

    def gradient(self, x, args) -> np.ndarray:
        return self.value_and_grad(x, args)[1]

    def hessian(self, x, args) -> np.ndarray:
        return np.asarray(self._hessian_fn(jnp.asarray(x), *args))

    def term_values(self, x, args):
        terms, extras = self._terms_fn(jnp.asarray(x), *args)
        terms = {k: float(v) for k, v in terms.items()}
        extras = {k: np.asarray(v) for k, v in extras.items()}
        return terms, extras


def get_model(params: ActuatorParams, material: MaterialParams, opts: SolverOptions) -> RodModel:
    key = (params, material, opts)
    model = _MODEL_CACHE.get(key)
    if model is None:
        model = RodModel(params, material, opts)
        _MODEL_CACHE[key] = model
    return model


def _state_args(state: RigState, control: ControlInput, material, opts):
    material = material or MaterialParams()
    opts = opts or SolverOptions(segment_count=state.segment_count)
    if opts.segment_count != state.segment_count:
        opts = replace(opts, segment_count=state.segment_count)
    model = get_model(state.params, material, opts)
    return model, model.pack(state.positions), model.control_args(control)


def total_energy(
    state: RigState,
    control: ControlInput,
    material: MaterialParams | None = None,
    opts: SolverOptions | None = None,
) -> float:
    """Total potential energy of ``state`` under ``control`` [J]."""
    model, x, args = _state_args(state, control, material, opts)
    return model.energy(x, args)


def energy_terms(
    state: RigState,
    control: ControlInput,
    material: MaterialParams | None = None,
    opts: SolverOptions | None = None,
) -> dict:
    """Per-term energy breakdown plus thread/gap diagnostics."""
    model, x, args = _state_args(state, control, material, opts)
    terms, extras = model.term_values(x, args)
    terms.update({k: v for k, v in extras.items()})
    return terms


def energy_gradient(
    state: RigState,
    control: ControlInput,
    material: MaterialParams | None = None,
    opts: SolverOptions | None = None,
) -> np.ndarray:
    """Gradient w.r.t. the free node coordinates, shape (2, N, 3).

    Row i of axis 1 corresponds to node i+1 of the tube (node 0 is
    clamped and carries no degrees of freedom).
    """
    model, x, args = _state_args(state, control, material, opts)
    return model.gradient(x, args).reshape(2, model.n_segments, 3)

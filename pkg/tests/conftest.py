from __future__ import annotations

import functools

import pytest
from hypothesis import HealthCheck, settings

from dmsx.algebra import build_ext
from dmsx.harness import OrbitSpec, enumerate_closed_arcs
from dmsx.surface import compile_surface, seed_surface

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

MAIN_SEEDS = ("disk_a(2)", "disk_a(3)", "annulus(1,1)", "annulus(2,1)")


@functools.lru_cache(maxsize=None)
def surf_of(name: str):
    return compile_surface(seed_surface(name))


@functools.lru_cache(maxsize=None)
def ext_of(name: str):
    return build_ext(surf_of(name))


@functools.lru_cache(maxsize=None)
def orbit_of(name: str, depth: int = 1):
    return tuple(enumerate_closed_arcs(surf_of(name), OrbitSpec(depth=depth)).curves)


@pytest.fixture
def disk2():
    return surf_of("disk_a(2)")


@pytest.fixture
def disk3():
    return surf_of("disk_a(3)")

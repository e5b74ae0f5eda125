import os
import random

from torofan.cone import Cone
from torofan.fan import Fan, FanTriple
from torofan.fanio import load_fan_file

__all__ = [
    "FIXTURE_DIR",
    "SEED",
    "load",
    "quadrant",
    "square_cone",
    "projective_line",
    "random_generators",
    "random_pointed_fan",
    "make_rng",
]

FIXTURE_DIR = os.path.join(os.path.dirname(__file__), "..", "misc", "fixtures")

SEED = 20180301


def load(name):
    return load_fan_file(os.path.join(FIXTURE_DIR, name))


def quadrant(B=(0,), C=(1,)):
    return FanTriple(Fan([(1, 0), (0, 1)], [[0, 1]]), B, C)


def square_cone(B=(0,), C=(1,)):
    rays = [(0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)]
    return FanTriple(Fan(rays, [[0, 1, 2, 3]]), B, C)


def projective_line(B=(), C=()):
    return FanTriple(Fan([(1,), (-1,)], [[0], [1]]), B, C)


def random_generators(rng, rank, count, spread=2):
    """
    Nonzero integer vectors with a positive last coordinate, so the
    cone they span is pointed.
    """

    vectors = []
    while len(vectors) < count:
        head = [rng.randint(-spread, spread) for _ in range(rank - 1)]
        vectors.append(tuple(head + [rng.randint(1, spread + 1)]))
    return vectors


def random_pointed_fan(rng, rank, count):
    cone = Cone(random_generators(rng, rank, count), rank)
    return Fan(cone.rays, [range(len(cone.rays))], rank)


def make_rng(offset=0):
    return random.Random(SEED + offset)

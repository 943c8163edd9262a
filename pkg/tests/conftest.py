import math
from fractions import Fraction

from ldic.channel import ChannelParams, FeedbackDist
from ldic.scheme import SchemeConfig

ALWAYS_ON = FeedbackDist(0, 0, 0, 1)
NEVER_ON = FeedbackDist(1, 0, 0, 0)


def corner_config(N: int, scale, B: int = 4, dist=ALWAYS_ON, exterior: bool = False) -> SchemeConfig:
    """Symmetric (2,1,1,2) config at ``scale`` times the corner (3/2, 3/2).

    Each user's rate splits 2:1 into private and common bits, rounded down to
    whole bits per block (up when ``exterior`` so the point stays outside).
    """
    rnd = math.ceil if exterior else math.floor
    scale = Fraction(scale)
    rp = Fraction(rnd(scale * N), N)
    rc = Fraction(rnd(scale * N / 2), N)
    return SchemeConfig(ChannelParams(2, 1, 1, 2), dist, B, N, rp, rc, rp, rc)


def zero_rate_config(N: int = 8, B: int = 3, dist=ALWAYS_ON) -> SchemeConfig:
    return SchemeConfig(ChannelParams(2, 1, 1, 2), dist, B, N, 0, 0, 0, 0)


def interference_free_config(N: int = 8, B: int = 3, dist=ALWAYS_ON) -> SchemeConfig:
    return SchemeConfig(ChannelParams(3, 0, 0, 2), dist, B, N, 3, 0, 2, 0)


# one summary line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

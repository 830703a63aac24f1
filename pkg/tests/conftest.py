from fractions import Fraction

from hypothesis import settings, strategies as st

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


def rationals(min_num=1, max_num=12, max_den=12):
    """Positive rationals with small numerators and denominators."""
    return st.builds(Fraction, st.integers(min_num, max_num), st.integers(1, max_den))


def signed_rationals(bound=6, max_den=6):
    return st.builds(Fraction, st.integers(-bound, bound), st.integers(1, max_den))


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    verdicts = getattr(module, "VERDICTS", None)
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(verdicts):
        terminalreporter.write_line(verdicts[number])
    missing = [n for n in range(1, 11) if n not in verdicts]
    if missing:
        terminalreporter.write_line(f"not run: {missing}")

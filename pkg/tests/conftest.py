import hypothesis
import hypothesis.strategies as st

from labelsearch import TaskSpec, generate_task

hypothesis.settings.register_profile(
    "ci", max_examples=40, deadline=None, derandomize=True
)
hypothesis.settings.register_profile(
    "thorough", max_examples=300, deadline=None
)
hypothesis.settings.load_profile("ci")


@st.composite
def small_tasks(draw, max_n=10, min_m=1, max_m=10):
    """Synthetic tasks small enough for exhaustive cross-checks."""
    spec = TaskSpec(
        m=draw(st.integers(min_m, max_m)),
        n=draw(st.integers(2, max_n)),
        d=draw(st.integers(1, 4)),
        separation=draw(st.floats(0.0, 5.0, allow_nan=False)),
        noise_sigma=draw(st.floats(0.3, 2.0, allow_nan=False)),
        seed=draw(st.integers(0, 2**31 - 1)),
    )
    return generate_task(spec)


learner_kinds = st.sampled_from(["centroid", "onenn"])

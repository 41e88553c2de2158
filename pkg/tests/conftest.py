import os

import matplotlib

matplotlib.use("Agg")

# hypothesis profile: deterministic and bounded so the suite stays quick
from hypothesis import settings  # noqa: E402

settings.register_profile("repo", max_examples=60, deadline=None, derandomize=True)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))

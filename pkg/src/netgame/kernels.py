"""Backend selection for the hot loops.

The compiled extension is used when it imports; otherwise, or when
``NETGAME_PURE_PYTHON=1`` is set, the numpy implementations are used.
"""

import os

from . import _pykernels

pure = _pykernels

if os.environ.get("NETGAME_PURE_PYTHON") == "1":
    compiled = None
else:
    try:
        from . import _kernels as compiled
    except ImportError:  # extension not built
        compiled = None

active = compiled if compiled is not None else pure
BACKEND = "compiled" if compiled is not None else "python"

best_selection = active.best_selection
weighted_lambda2 = active.weighted_lambda2
golden_line_search = active.golden_line_search

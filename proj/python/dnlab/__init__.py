"""DN operators of finite Dirichlet forms.

Thin re-export of the compiled extension; see the project README for the
matching command-line tool.
"""

from ._dnlab import *  # noqa: F401,F403
from ._dnlab import __version__  # noqa: F401

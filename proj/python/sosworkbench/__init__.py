from _sosworkbench import *  # noqa: F401,F403

"""Variable-horizon LP guidance for rendezvous and docking with a tumbling target.

Typical use::

    from vhrvd import load_scenario, plan
    res = plan(load_scenario("table1").build())
    res.N_hat, res.J
"""

from vhrvd.scenario import ScenarioConfig, ScenarioError, load_scenario
from vhrvd.search import PlanResult, PlanStatus, enumerate_all, plan

__all__ = ["ScenarioConfig", "ScenarioError", "load_scenario", "plan", "PlanResult", "PlanStatus",
           "enumerate_all"]
__version__ = "0.1.0"

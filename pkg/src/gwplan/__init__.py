"""Traffic-aware gateway-UAV placement for star-topology flying networks."""

from .geometry import Cuboid, Point3
from .rf import (DemandUnsatisfiableError, McsEntry, McsTable, RadioConfig,
                 fspl_db, max_distance, snr_db)
from .placement import (FapState, NoSolutionError, PlacementSolution,
                        SnrConstraint, build_constraints, check_point,
                        gwp_solve, min_max_excess, required_capacity)
from .baselines import (FapCentroid, Gwp, PlacementStrategy, RandomWaypoint,
                        VenueCenter, fap_centroid, random_waypoint_track,
                        venue_center)
from .scenario import (Scenario, ScenarioFap, Trajectory, fair_share,
                       generate_two_zone, load_scenario, load_waypoints,
                       plan_gateway_track, save_scenario, save_waypoints,
                       scenario_a, scenario_b)
from .sim import (CodelConfig, SimConfig, SimResult, analytic_single_link_oracle,
                  run_sim)
from .analysis import MetricSeries, aggregate_runs, ccdf, cdf, gain, percentile

__version__ = "0.1.0"

"""System-level Monte Carlo simulator for mmWave inter-operator spectrum pooling."""

__version__ = "0.1.0"

from .antenna import (ArrayGeometry, Beam, best_beam, effective_gain,
                      ula_gain, ula_gain_u, upa_gain)
from .channel import (ChannelParams, ChannelRealization, Cluster, LinkState,
                      gen_clusters, path_loss_db, realize_link, realize_links,
                      sample_state, state_probabilities)
from .config import (BandPlan, CoordinationMode, PoolingMode, ScenarioConfig,
                     band_plan, bands_overlap, load_config, validate)
from .context import DropContext, build_context, linkset_from_realizations
from .deployment import Topology, bearing, drop_network, torus_distance
from .engine import build_drop_context, run_drop, simulate_slots
from .harness import (GainReport, ScenarioResult, confidence_interval,
                      percentile, pooling_gain, run_campaign, run_scenario)
from .linkbudget import (SINRReport, noise_power_dbm, rates_for_selection,
                         sinr_report, slot_rate)
from .scheduler import (BeamAssignment, SlotSchedule, greedy_select,
                        pf_objective, schedule_slot, update_throughputs)

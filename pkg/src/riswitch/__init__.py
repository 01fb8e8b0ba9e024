"""RIS-assisted multi-user SISO interference network simulation and
switch-configuration search."""

from .channel import (ChannelRealization, CsiNoiseParams, FadingParams,
                      NetworkGeometry, apply_csi_noise, path_loss,
                      sample_network_realization, sample_ris_rx_channel,
                      sample_tx_ris_channel, substream)
from .errors import ConfigError, SearchSpaceError
from .metrics import (OBJECTIVES, LinkBudget, effective_channel,
                      objective_on_estimates, objective_value, sinr, sinr_all,
                      user_rate)
from .optimize import (AnnealingParams, Architecture, SearchBudget,
                       SearchResult, SearchSpec, block_coordinate_cell_search,
                       exhaustive_search, greedy_flip, run_search,
                       search_space_size, simulated_annealing)
from .ris import (CellShape, IRisPattern, PhaseShifterPattern, RisMatrix,
                  SRisPattern, build_iris_matrix, build_phase_shifter_matrix,
                  build_raw_cell_matrix, build_sris_matrix, cell_members,
                  enumerate_cell_patterns, normalize_tilde, pattern_from_string,
                  pattern_to_string, split_hat_tilde)

__version__ = "0.1.0"

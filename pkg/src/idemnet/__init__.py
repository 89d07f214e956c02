"""Small-world network models, distance-concentration measurement, and
beacon/compact routing with memory accounting."""

from .graph import (UNREACHABLE, Graph, GraphError, DistanceArray, BallProfile,
                    ComponentInfo, DegreeHistogram, build_graph, bfs_distances,
                    ball_profile, largest_component, degree_histogram)
from .generators import (ModelSpec, generate, validate_spec, gen_erdos_renyi,
                         gen_watts_strogatz, gen_watts_strogatz_with_meta,
                         gen_kleinberg, gen_kleinberg_with_meta,
                         gen_barabasi_albert, gen_configuration,
                         gen_random_regular, kleinberg_lattice_distance,
                         KleinbergLongRange)
from .idemetric import (DistanceHistogram, ConcentrationReport, PumpReport,
                        UsReport, FedReport, RuValue, sample_pair_distances,
                        concentration_report, idemetric_scan, pump_check, r_u,
                        us_proxy, fed_check)
from .analytics import (RecurrenceSeries, CompanionMatrix, AlphaEstimate,
                        BoundCheck, recurrence_c, recurrence_c_general,
                        companion_matrix, dominant_eigenvalue, growth_rate,
                        predict_ell, verify_longrange_lower_bound)
from .routing import (BeaconTables, RoutedPath, StretchReport, CompactScheme,
                      TraceResult, MemoryReport, RoutingError, UnroutableError,
                      build_beacon_tables, beacon_route, stretch_report,
                      distributed_beacon_sim, compact_scheme_build,
                      compact_route_sim, memory_account)
from .edgelist import EdgeListError, parse_edge_list, write_edge_list

__version__ = "0.1.0"

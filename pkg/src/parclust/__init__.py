"""parclust: shared-memory parallel graph clustering, quality metrics, and a
config-driven benchmark harness."""

from .graph import (Clustering, Graph, GraphError, canonical_labels,
                    connected_components, core_numbers)
from .weighted import (AffinityParams, ClusterTimeout, Dendrogram,
                       LambdaCCParams, ParHACParams, cluster_affinity,
                       cluster_connectivity, cluster_correlation,
                       cluster_modularity, cluster_parhac, cut_dendrogram,
                       lambda_cc_objective, modularity_score)
from .unweighted import (LabelPropParams, LDDParams, ScanParams, SlpaParams,
                         TectonicParams, cluster_kcore, cluster_label_prop,
                         cluster_ldd, cluster_scan, cluster_slpa,
                         cluster_tectonic, structural_similarity,
                         tectonic_edge_weights)
from .metrics import (GroundTruth, MetricsReport, PairLabels, ari,
                      cluster_stats, evaluate, f_beta, nmi, pair_label_pr,
                      precision_recall, triangle_density,
                      weighted_edge_density)
from .analysis import FrontierPoint, auc_high_precision, pareto_frontier
from .datasets import (RmatParams, VectorSet, build_knn_graph, generate_rmat,
                       load_communities)
from .bench import (BenchConfig, RunRecord, StatsConfig, execute, expand_grid,
                    parse_bench_config, parse_stats_config)

__version__ = "0.1.0"

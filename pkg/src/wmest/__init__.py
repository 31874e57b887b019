"""Estimation of a user's world model from an agent's world model and queries,
via graph embeddings of state-transition graphs and concept vectors."""

__version__ = "0.1.0"

from .gridworld import (Action, AgentState, Environment, LayoutConfig,
                        Orientation, build_catalog, reachable, start_state,
                        step)
from .policy import (Policy, action_prob, perturb_catalog, perturb_policy,
                     plan_catalog, plan_optimal, sample_action)
from .worldgraph import (LabelBag, LabelDictionary, WorldGraph,
                         build_label_corpus, build_world_graph, wl_label_bag)
from .embedding import (EmbeddingSpace, TrainConfig, cosine, distance,
                        project_2d, train)
from .concept import (ConceptVector, Query, language_vector, pair_labeler,
                      query_vector, user_vector, LANGUAGE_LABELS)
from .estimator import (EstimationResult, EstimatorConfig, estimate, explain,
                        score, score_probabilistic)
from .stats import paired_t_test
from .experiments import Workspace, build_workspace

/* C interface to the graph pursuit library.
 *
 * Every function returns a gp_status; results come back through out
 * parameters. On failure the out parameters are left untouched and
 * gp_last_error() describes what went wrong for the calling thread.
 * Objects returned through handle out parameters are owned by the caller
 * and released with the matching _free function; strings returned through
 * char** are released with gp_string_free. All functions are safe to call
 * from several threads as long as each handle is used from one thread at
 * a time.
 */
#ifndef GRAPHPURSUIT_H
#define GRAPHPURSUIT_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gp_status {
  GP_OK = 0,
  GP_ERR_INVALID_ARGUMENT = 1, /* null handle or out pointer */
  GP_ERR_DOMAIN = 2,           /* input outside the operation's domain */
  GP_ERR_CONSTRUCTION = 3,     /* chaining search failed */
  GP_ERR_PROTOCOL = 4,         /* a strategy broke the game rules */
  GP_ERR_IO = 5,               /* report or CSV writing failed */
  GP_ERR_INTERNAL = 6
} gp_status;

/* Message for this thread's most recent failing call. Owned by the
 * library; the pointer stays valid until the next failing call on the
 * same thread. Never null. */
const char* gp_last_error(void);

const char* gp_version(void);

void gp_string_free(char* s);

/* ---- graphs ---- */

typedef struct gp_graph gp_graph;

/* Builds a graph from a generator expression such as "interval(1)",
 * "circle(1.0)", "theta(1,2,3)", "grid-disk(1,0.1)",
 * "torus-grid(4,4,0.25)", "random-tree(12,7)", or "polygon(1,8)". */
gp_status gp_graph_generate(const char* expr, gp_graph** out);

gp_status gp_graph_from_json(const char* text, gp_graph** out);
gp_status gp_graph_to_json(const gp_graph* g, char** out);
gp_status gp_graph_vertex_count(const gp_graph* g, int* out);
gp_status gp_graph_edge_count(const gp_graph* g, int* out);
gp_status gp_graph_total_edge_length(const gp_graph* g, double* out);

/* Shortest-path distance between two points, each given as an edge id
 * and an offset along that edge. */
gp_status gp_graph_distance(const gp_graph* g, int edge_p, double offset_p,
                            int edge_q, double offset_q, double* out);

void gp_graph_free(gp_graph* g);

/* ---- pursuit primitives ---- */

/* One pursuit step of size beta from (edge_l, offset_l) toward
 * (edge_t, offset_t): lands on the target if it is within beta,
 * otherwise moves exactly beta along a shortest path. */
gp_status gp_beta_pursuit_step(const gp_graph* g, int edge_l, double offset_l,
                               int edge_t, double offset_t, double beta,
                               int* out_edge, double* out_offset);

/* ---- distance between spaces ---- */

/* Certified upper bound on the Gromov-Hausdorff distance, from nets
 * built at net_radius and the best bijection found between them. */
gp_status gp_gh_upper_bound(const gp_graph* a, const gp_graph* b,
                            double net_radius, double* out);

/* |diam a - diam b| / 2. */
gp_status gp_gh_diameter_lower_bound(const gp_graph* a, const gp_graph* b,
                                     double* out);

/* Covering net of radius at most eps, as JSON: its points, exact
 * covering radius, and size. */
gp_status gp_net_json(const gp_graph* g, double eps, char** out);

/* Builds the paired projection maps certifying that a and b are within
 * eps of each other and serializes them. Fails with GP_ERR_CONSTRUCTION
 * (message carries the best distortion reached) when no acceptable
 * pairing exists at that budget. */
gp_status gp_chaining_build_json(const gp_graph* a, const gp_graph* b,
                                 double eps, char** out);

/* ---- games and experiments ----
 *
 * These take an experiment configuration as JSON. Fields:
 *   kind     "transfer-bound" | "graph-refinement" | "gh-sweep" |
 *            "single-game"
 *   graph    generator expression for the base space
 *   levels   array of generator expressions (refinement / sweep)
 *   reference  generator expression for the limit description
 *   alpha, T, eps (number or array), evaders (array of
 *   "flee" | "stationary" | "random-walk" | "maximin"), subdivisions,
 *   seed, beta, beta_override, negative_control, monotone_tol, out_dir
 * Unknown keys and invalid combinations are rejected with GP_ERR_DOMAIN.
 * When out_dir is set, reports and CSV files are also written there.
 */

typedef struct gp_game gp_game;

/* Runs the single game the config describes: a greedy pursuer from
 * vertex 0 against the named evader started at the farthest point. */
gp_status gp_game_run(const char* config_json, gp_game** out);

gp_status gp_game_min_distance(const gp_game* g, double* out);
gp_status gp_game_argmin_step(const gp_game* g, int* out);
gp_status gp_game_steps(const gp_game* g, int* out);

/* Columns: step,time,pursuer_edge,pursuer_offset,evader_edge,
 * evader_offset,distance. */
gp_status gp_game_to_csv(const gp_game* g, char** out);

void gp_game_free(gp_game* g);

typedef struct gp_report gp_report;

/* Transfer-bound sweep: per eps, builds a perturbed copy of the base
 * graph, chains the two, certifies the inner pursuer, and audits the
 * transferred strategy's capture bound. */
gp_status gp_run_transfer_experiment(const char* config_json,
                                     gp_report** out);

/* Refinement sweep: per level, a capture radius estimate plus a
 * certified distance bound to the reference description. */
gp_status gp_run_refinement_experiment(const char* config_json,
                                       gp_report** out);

/* Distance bounds from the base graph to each level. */
gp_status gp_run_gh_sweep(const char* config_json, gp_report** out);

gp_status gp_report_to_json(const gp_report* r, char** out);

/* Plot/table CSV when the experiment kind emits one; empty otherwise. */
gp_status gp_report_csv(const gp_report* r, char** out);

/* 1 when the experiment asserted a bound and it was violated (or a level
 * failed), else 0. */
gp_status gp_report_failed(const gp_report* r, int* out);

void gp_report_free(gp_report* r);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* GRAPHPURSUIT_H */

/* C interface to the reinforced-walk library. All functions report failures
 * through rwr_status; rwr_last_error() holds the message of the most recent
 * failure on the calling thread. Strings returned through char** are owned by
 * the caller and released with rwr_string_free. */
#ifndef RWR_RWR_H
#define RWR_RWR_H

#include <stddef.h>
#include <stdint.h>

#if defined(RWR_BUILDING_LIBRARY)
#define RWR_API __attribute__((visibility("default")))
#else
#define RWR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rwr_status {
  RWR_OK = 0,
  RWR_ERR_INVALID_ARGUMENT = 1, /* parameter outside its domain, malformed input */
  RWR_ERR_REGIME = 2,           /* quantity undefined in the requested regime */
  RWR_ERR_USAGE = 3,            /* null handle, unknown key or check name */
  RWR_ERR_IO = 4,
  RWR_ERR_INTERNAL = 5
} rwr_status;

RWR_API const char* rwr_last_error(void);
RWR_API const char* rwr_status_string(rwr_status status);
RWR_API void rwr_string_free(char* s);

/* Run configuration.
 * string keys: kind (erw|srs|tree), model (reinforced|strong), method (direct|clusters),
 *              format (csv|json), t_grid (comma-separated fractions of n)
 * real keys:   b, p, alpha
 * int keys:    dim, n, replicas, seed, threads, dump (0/1) */
typedef struct rwr_config rwr_config;

RWR_API rwr_status rwr_config_new(rwr_config** out);
RWR_API void rwr_config_free(rwr_config* config);
RWR_API rwr_status rwr_config_set_real(rwr_config* config, const char* key, double value);
RWR_API rwr_status rwr_config_set_int(rwr_config* config, const char* key, int64_t value);
RWR_API rwr_status rwr_config_set_string(rwr_config* config, const char* key, const char* value);
/* Applies every key present in a JSON object; absent keys keep their values. */
/* The returned pointer stays valid until the config is modified or freed. */
RWR_API rwr_status rwr_config_get_string(const rwr_config* config, const char* key, const char** value);
RWR_API rwr_status rwr_config_load_json(rwr_config* config, const char* json_text);
RWR_API rwr_status rwr_config_validate(const rwr_config* config);
RWR_API rwr_status rwr_config_to_json(const rwr_config* config, char** out);
/* Regime classification of the configured model as a JSON object. */
RWR_API rwr_status rwr_config_regime(const rwr_config* config, char** out);

/* Simulation output: a table of doubles with named columns, rows sorted by replica. */
typedef struct rwr_result rwr_result;

RWR_API rwr_status rwr_simulate(const rwr_config* config, rwr_result** out);
RWR_API void rwr_result_free(rwr_result* result);
RWR_API rwr_status rwr_result_shape(const rwr_result* result, size_t* rows, size_t* cols);
RWR_API rwr_status rwr_result_column(const rwr_result* result, size_t col, const char** name);
RWR_API rwr_status rwr_result_data(const rwr_result* result, const double** data);
/* format is "csv" or "json" */
RWR_API rwr_status rwr_result_format(const rwr_result* result, const char* format, char** out);
RWR_API rwr_status rwr_result_save(const rwr_result* result, const char* path, const char* format);

/* Named statistical checks. name may be "all". out receives a JSON array of reports. */
RWR_API size_t rwr_check_count(void);
RWR_API const char* rwr_check_name(size_t index);
RWR_API int rwr_check_criterion(size_t index);
RWR_API rwr_status rwr_verify(const char* name, uint64_t seed, unsigned threads, char** out, int* all_pass);

/* Incremental walk (kind erw, or kind srs which always runs the direct walk). */
typedef struct rwr_walk rwr_walk;

RWR_API rwr_status rwr_walk_new(const rwr_config* config, rwr_walk** out);
RWR_API void rwr_walk_free(rwr_walk* walk);
RWR_API rwr_status rwr_walk_step(rwr_walk* walk, int64_t steps);
RWR_API rwr_status rwr_walk_time(const rwr_walk* walk, int64_t* time);
RWR_API rwr_status rwr_walk_position(const rwr_walk* walk, double* out, size_t dim);

/* One percolated preferential attachment tree of n nodes (b, p, seed from config). */
typedef struct rwr_tree rwr_tree;

RWR_API rwr_status rwr_tree_new(const rwr_config* config, rwr_tree** out);
RWR_API void rwr_tree_free(rwr_tree* tree);
RWR_API rwr_status rwr_tree_size(const rwr_tree* tree, int64_t* nodes, int64_t* clusters);
/* parent is 0 for the root; cluster ids start at 1 in increasing root label */
RWR_API rwr_status rwr_tree_node(const rwr_tree* tree, int64_t node, int64_t* parent, int* cut, int64_t* cluster);
RWR_API rwr_status rwr_tree_cluster(const rwr_tree* tree, int64_t cluster, int64_t* root, int64_t* size,
                                    int64_t* half_edges);

#ifdef __cplusplus
}
#endif

#endif

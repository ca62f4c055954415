#ifndef WEYLRING_H
#define WEYLRING_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WrStatus {
  WR_STATUS_OK = 0,
  WR_STATUS_NULL_POINTER = 1,
  WR_STATUS_INVALID_ARGUMENT = 2,
  WR_STATUS_GUARD = 3,
  WR_STATUS_MISMATCH = 4,
  WR_STATUS_OVERFLOW = 5,
  WR_STATUS_PANIC = 6,
} WrStatus;

/**
 * A decomposition into irreducibles, components sorted by highest weight.
 */
typedef struct WrDecomposition WrDecomposition;

/**
 * A root system.
 */
typedef struct WrRootSystem WrRootSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next call on this thread.
 */
const char *wr_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 */
void wr_string_free(char *s);

/**
 * Opens a root system such as `"E6"` or `"D5"`.
 */
enum WrStatus wr_root_system_new(const char *name, struct WrRootSystem **out);

void wr_root_system_free(struct WrRootSystem *rs);

/**
 * Rank, or 0 for a null handle.
 */
size_t wr_root_system_rank(const struct WrRootSystem *rs);

/**
 * Number of positive roots, or 0 for a null handle.
 */
size_t wr_root_system_positive_root_count(const struct WrRootSystem *rs);

/**
 * Dimension of the irreducible module with highest weight `weight`, as a
 * decimal string.
 */
enum WrStatus wr_weyl_dimension(const struct WrRootSystem *rs,
                                const int64_t *weight,
                                size_t len,
                                char **out);

/**
 * Decomposes `V(left) ⊗ V(right)`; both weights have `len` coordinates.
 */
enum WrStatus wr_tensor_decompose(const struct WrRootSystem *rs,
                                  const int64_t *left,
                                  const int64_t *right,
                                  size_t len,
                                  struct WrDecomposition **out);

/**
 * Evaluates a built-in closed-form rule; `params` looks like `"n=5,a=1,d=0"`.
 */
enum WrStatus wr_closed_form(const char *rule_id, const char *params, struct WrDecomposition **out);

void wr_decomposition_free(struct WrDecomposition *d);

/**
 * Number of distinct components, or 0 for a null handle.
 */
size_t wr_decomposition_len(const struct WrDecomposition *d);

/**
 * Rank of the underlying root system, or 0 for a null handle.
 */
size_t wr_decomposition_rank(const struct WrDecomposition *d);

/**
 * Copies component `index` into `weight_out` (capacity `cap`, at least the
 * rank) and its multiplicity into `mult_out`.
 */
enum WrStatus wr_decomposition_component(const struct WrDecomposition *d,
                                         size_t index,
                                         int64_t *weight_out,
                                         size_t cap,
                                         uint64_t *mult_out);

/**
 * The decomposition as JSON, same schema as the command-line tool.
 */
enum WrStatus wr_decomposition_json(const struct WrDecomposition *d, char **out);

/**
 * Runs the spectrum check for a built-in module up to `max_level`.
 */
enum WrStatus wr_verify_spectrum(const char *module, uint32_t max_level, bool *passed);

/**
 * Runs the command-line tool in-process. `argv[0]` is the program name.
 * Output strings are always set on `Ok` and must be freed.
 */
enum WrStatus wr_cli_run(int argc,
                         const char *const *argv,
                         char **stdout_out,
                         char **stderr_out,
                         int *exit_code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WEYLRING_H */

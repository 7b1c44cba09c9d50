#ifndef COSETTREE_H
#define COSETTREE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Frontier semantics for derivatives.
 */
typedef enum CosettreeMode {
  COSETTREE_MODE_CLOSED = 0,
  COSETTREE_MODE_OPEN = 1,
} CosettreeMode;

/**
 * Result of every fallible call.
 */
typedef enum CosettreeStatus {
  COSETTREE_STATUS_OK = 0,
  COSETTREE_STATUS_NULL_POINTER = 1,
  COSETTREE_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed expression, tree or spec text.
   */
  COSETTREE_STATUS_PARSE = 3,
  /**
   * Well-formed input that violates a precondition.
   */
  COSETTREE_STATUS_INVALID_INPUT = 4,
  COSETTREE_STATUS_NOT_TAME = 5,
  COSETTREE_STATUS_CAP_EXCEEDED = 6,
  COSETTREE_STATUS_INTERNAL = 7,
} CosettreeStatus;

/**
 * Opaque symbolic group.
 */
typedef struct CosettreeGroup CosettreeGroup;

/**
 * Opaque finite-depth tree.
 */
typedef struct CosettreeTree CosettreeTree;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *cosettree_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void cosettree_string_free(char *s);

/**
 * Parses a group expression such as `sum(Z(4),finsup(Zq(3)))`.
 *
 * # Safety
 * `expr` must be a NUL-terminated string; `out_group` must be writable.
 */
enum CosettreeStatus cosettree_group_parse(const char *expr, struct CosettreeGroup **out_group);

/**
 * # Safety
 * `group` must come from [`cosettree_group_parse`] or be null.
 */
void cosettree_group_free(struct CosettreeGroup *group);

/**
 * # Safety
 * `group` must be a live handle; `out_string` must be writable.
 */
enum CosettreeStatus cosettree_group_to_string(const struct CosettreeGroup *group,
                                               char **out_string);

/**
 * # Safety
 * `group` must be a live handle; `out_result` must be writable.
 */
enum CosettreeStatus cosettree_group_is_torsion(const struct CosettreeGroup *group,
                                                bool *out_result);

/**
 * Torsion with finitely many elements of order `p`.
 *
 * # Safety
 * `group` must be a live handle; `out_result` must be writable.
 */
enum CosettreeStatus cosettree_group_is_p_compact(const struct CosettreeGroup *group,
                                                  uint64_t p,
                                                  bool *out_result);

/**
 * Reads a tree JSON document with the default caps.
 *
 * # Safety
 * `tree_json` must be a NUL-terminated string; `out_tree` must be writable.
 */
enum CosettreeStatus cosettree_tree_from_json(const char *tree_json,
                                              struct CosettreeTree **out_tree);

/**
 * # Safety
 * `tree` must come from [`cosettree_tree_from_json`] or be null.
 */
void cosettree_tree_free(struct CosettreeTree *tree);

/**
 * Canonical JSON of the tree.
 *
 * # Safety
 * `tree` must be a live handle; `out_json` must be writable.
 */
enum CosettreeStatus cosettree_tree_to_json(const struct CosettreeTree *tree, char **out_json);

/**
 * # Safety
 * `tree` must be a live handle; the out-pointers must be writable.
 */
enum CosettreeStatus cosettree_tree_kind(const struct CosettreeTree *tree,
                                         bool *out_group_tree,
                                         bool *out_coset_tree);

/**
 * Height of the tree; always finite at finite depth.
 *
 * # Safety
 * `tree` must be a live handle; `out_height` must be writable.
 */
enum CosettreeStatus cosettree_tree_height(const struct CosettreeTree *tree,
                                           enum CosettreeMode mode,
                                           uint64_t *out_height);

/**
 * Classifies a spec JSON document; writes the report as JSON.
 *
 * # Safety
 * `spec_json` must be a NUL-terminated string; `out_json` must be writable.
 */
enum CosettreeStatus cosettree_classify_json(const char *spec_json, char **out_json);

/**
 * Embedding plan of a tame product spec up to `horizon` (at least 2).
 *
 * # Safety
 * `spec_json` must be a NUL-terminated string; `out_json` must be writable.
 */
enum CosettreeStatus cosettree_embed_plan_json(const char *spec_json,
                                               uint32_t horizon,
                                               char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COSETTREE_H */

#ifndef AXIAL_H
#define AXIAL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define AX_OK 0

#define AX_FAIL 1

#define AX_ERR_NULL -1

#define AX_ERR_UTF8 -2

#define AX_ERR_PARSE -3

#define AX_ERR_INVALID -4

#define AX_ERR_BOUND -5

#define AX_ERR_UNSUPPORTED -6

#define AX_ERR_PANIC -99

// A parsed finite-dimensional algebra with its declared axes and law.
typedef struct AxAlgebra AxAlgebra;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses an algebra file. On success `*out` owns a new handle.
//
// # Safety
// `text_ptr` must be a nul-terminated string and `out` a valid pointer.
int32_t ax_algebra_parse(const char *text_ptr, struct AxAlgebra **out);

// Builds a zoo entry. `field` is `"Q"` or a prime such as `"7"`.
//
// # Safety
// `name` and `field` must be nul-terminated strings and `out` a valid pointer.
int32_t ax_algebra_zoo(const char *name, const char *field, struct AxAlgebra **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `alg` must come from this library and not be used afterwards.
void ax_algebra_free(struct AxAlgebra *alg);

// Dimension of the algebra, or 0 for a null handle.
//
// # Safety
// `alg` must be null or a live handle.
size_t ax_algebra_dim(const struct AxAlgebra *alg);

// The algebra in file syntax.
//
// # Safety
// `alg` must be a live handle and `out` a valid pointer.
int32_t ax_algebra_emit(const struct AxAlgebra *alg, char **out);

// Eigenspace decomposition as JSON. `axis` and `law` may be null to use
// the declared ones. Returns `AX_FAIL` when the parts do not span.
//
// # Safety
// Pointers must be null (where allowed) or valid; `out` must be valid.
int32_t ax_decompose(const struct AxAlgebra *alg, const char *axis, const char *law, char **out);

// Fusion law check; the JSON lists violations by kind.
//
// # Safety
// As for `ax_decompose`.
int32_t ax_fusion_check(const struct AxAlgebra *alg, const char *axis, const char *law, char **out);

// Martindale-like conditions; `AX_OK` when every condition holds.
//
// # Safety
// As for `ax_decompose`.
int32_t ax_martindale(const struct AxAlgebra *alg, const char *axis, const char *law, char **out);

// Searches for a non-additive multiplicative map. `target` is
// `"nonadditive-iso"` or `"nonadditive-derivation"`; a zero `budget` means
// exhaustive. A completed search returns `AX_OK` whether or not a witness
// was found; the JSON `status` says which.
//
// # Safety
// As for `ax_decompose`.
int32_t ax_search(const struct AxAlgebra *alg,
                  const char *target,
                  size_t n,
                  uint64_t budget,
                  uint64_t seed,
                  char **out);

// Runs one `axial` command line. `argv` excludes the program name; `input`
// (may be null) is fed as standard input. `*out` receives standard output
// and the return value is the command's exit code (0, 1 or 2).
//
// # Safety
// `argv` must point to `argc` nul-terminated strings; `out` must be valid.
int32_t ax_run(size_t argc, const char *const *argv, const char *input, char **out);

// Message for the last error on this thread, or null. The pointer stays
// valid until the next call into this library on the same thread.
const char *ax_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void ax_string_free(char *s);

// Library version, static storage.
const char *ax_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AXIAL_H */

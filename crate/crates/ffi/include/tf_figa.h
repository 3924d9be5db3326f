#ifndef TF_FIGA_H
#define TF_FIGA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum TfStatus {
  TF_STATUS_OK = 0,
  TF_STATUS_NULL_POINTER = 1,
  TF_STATUS_INVALID_ARGUMENT = 2,
  TF_STATUS_LATTICE_LITERAL = 3,
  TF_STATUS_NOT_A_FRAME = 4,
  TF_STATUS_CONFIG = 5,
  TF_STATUS_IO = 6,
  TF_STATUS_BUFFER_TOO_SMALL = 7,
  TF_STATUS_INTERNAL = 8,
  TF_STATUS_PANIC = 9,
} TfStatus;

// A subgroup of ℤ_N^d × ℤ_N^d.
typedef struct TfLattice TfLattice;

// A signal on ℤ_N^d.
typedef struct TfSignal TfSignal;

// Both sides of the fundamental identity and their residuals.
typedef struct TfFigaResult {
  double lhs_re;
  double lhs_im;
  double rhs_re;
  double rhs_im;
  double abs_residual;
  double rel_residual;
} TfFigaResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. The pointer is
// valid until the next failing call on the same thread.
const char *tf_last_error(void);

// Static description of a status code.
const char *tf_status_message(int32_t status);

// Library version as a static string.
const char *tf_version(void);

// Releases a string returned by the library. NULL is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void tf_string_free(char *s);

// Signal on ℤ_n^d from `len` complex values stored as interleaved doubles
// (`2 * len` entries), in row-major order.
//
// # Safety
// `values` must point to `2 * len` readable doubles; `out` must be writable.
enum TfStatus tf_signal_from_values(size_t n,
                                    size_t d,
                                    const double *values,
                                    size_t len,
                                    struct TfSignal **out);

// Seeded signal with standard complex normal entries.
//
// # Safety
// `out` must be writable.
enum TfStatus tf_signal_random(size_t n, size_t d, uint64_t seed, struct TfSignal **out);

// Unit-norm periodized Gaussian.
//
// # Safety
// `out` must be writable.
enum TfStatus tf_signal_gaussian(size_t n, size_t d, struct TfSignal **out);

// Number of complex entries, or 0 for NULL.
//
// # Safety
// `signal` must be NULL or a live handle.
size_t tf_signal_len(const struct TfSignal *signal);

// Copies the values into `out` as interleaved doubles. `capacity` counts
// complex entries.
//
// # Safety
// `signal` must be a live handle; `out` must hold `2 * capacity` doubles.
enum TfStatus tf_signal_copy_values(const struct TfSignal *signal, double *out, size_t capacity);

// # Safety
// `signal` must be NULL or a live handle, not used afterwards.
void tf_signal_free(struct TfSignal *signal);

// Parses a lattice literal such as `"N=12;d=1;gens=(3,0),(0,4)"`.
//
// # Safety
// `literal` must be a NUL-terminated string; `out` must be writable.
enum TfStatus tf_lattice_parse(const char *literal, struct TfLattice **out);

// Number of lattice points, or 0 for NULL.
//
// # Safety
// `lattice` must be NULL or a live handle.
size_t tf_lattice_cardinality(const struct TfLattice *lattice);

// The adjoint lattice as a new handle.
//
// # Safety
// `lattice` must be a live handle; `out` must be writable.
enum TfStatus tf_lattice_adjoint(const struct TfLattice *lattice, struct TfLattice **out);

// Canonical literal of the lattice; release with [`tf_string_free`].
//
// # Safety
// `lattice` must be a live handle; `out` must be writable.
enum TfStatus tf_lattice_literal(const struct TfLattice *lattice, char **out);

// # Safety
// `lattice` must be NULL or a live handle, not used afterwards.
void tf_lattice_free(struct TfLattice *lattice);

// Evaluates both sides of the fundamental identity for `(f1, f2, g1, g2)`
// on `lattice`.
//
// # Safety
// All handles must be live; `out` must be writable.
enum TfStatus tf_figa_check(const struct TfSignal *f1,
                            const struct TfSignal *f2,
                            const struct TfSignal *g1,
                            const struct TfSignal *g2,
                            const struct TfLattice *lattice,
                            struct TfFigaResult *out);

// Optimal frame bounds of the Gabor system of `window` over `lattice`.
//
// # Safety
// Handles must be live; `lower` and `upper` must be writable.
enum TfStatus tf_frame_bounds(const struct TfSignal *window,
                              const struct TfLattice *lattice,
                              double *lower,
                              double *upper);

// Canonical dual window; fails with `TF_STATUS_NOT_A_FRAME` when the system
// is not a frame.
//
// # Safety
// Handles must be live; `out` must be writable.
enum TfStatus tf_canonical_dual(const struct TfSignal *window,
                                const struct TfLattice *lattice,
                                struct TfSignal **out);

// Runs a JSON run configuration and returns the JSON report, byte-identical
// to the CLI's. `base_dir` resolves `file:` signal specs and may be NULL
// for the working directory. `all_pass` may be NULL.
//
// # Safety
// Strings must be NUL-terminated; `report` must be writable.
enum TfStatus tf_run_config(const char *config_json,
                            const char *base_dir,
                            double tolerance_scale,
                            char **report,
                            bool *all_pass);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TF_FIGA_H */

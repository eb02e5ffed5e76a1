#ifndef FVHOTEL_H
#define FVHOTEL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes for every C-ABI call.
typedef enum FvhStatus {
  // Success.
  FvhOk = 0,
  // A required pointer argument was null.
  FvhNullPointer = 1,
  // An argument failed validation (dimensions, ranges, parse errors).
  FvhInvalidArgument = 2,
  // The computation could not be carried out at this resolution
  // (undersampled plaquette, inconsistent signs, tracking loss, …).
  FvhNumericalFailure = 3,
  // The caller-provided buffer cannot hold the result.
  FvhBufferTooSmall = 4,
} FvhStatus;

// Opaque sampled complex field.
typedef struct FvhField FvhField;

// Opaque simulation context: optics, grid, and detection defaults.
typedef struct FvhSim FvhSim;

// A detected phase singularity.
typedef struct FvhVortex {
  // Position in meters.
  double x;
  double y;
  // Winding number, exactly −1 or +1.
  long long charge;
} FvhVortex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Create a simulation context. `ny = 0` means square (`ny = nx`).
//
// # Safety
// `out` must be a valid pointer; the result must be released with
// [`fvh_sim_free`].
enum FvhStatus fvh_sim_new(double wavelength,
                           double distance,
                           double half_width,
                           size_t nx,
                           size_t ny,
                           struct FvhSim **out);

// Release a simulation context. Null is a no-op.
//
// # Safety
// `sim` must come from [`fvh_sim_new`] and not be used afterwards.
void fvh_sim_free(struct FvhSim *sim);

// Propagate the plate field of charge `mu` onto the context grid.
//
// # Safety
// `sim` and `out` must be valid; the field must be released with
// [`fvh_field_free`].
enum FvhStatus fvh_field_compute(const struct FvhSim *sim, double mu, struct FvhField **out);

// Release a field. Null is a no-op.
//
// # Safety
// `field` must come from [`fvh_field_compute`] and not be used afterwards.
void fvh_field_free(struct FvhField *field);

// Grid dimensions of a field.
//
// # Safety
// All pointers must be valid.
enum FvhStatus fvh_field_dims(const struct FvhField *field, size_t *nx, size_t *ny);

// Copy the complex samples out as interleaved (re, im) pairs, row-major
// with y varying slowest. `capacity` counts doubles and must be at least
// 2·nx·ny.
//
// # Safety
// `out` must point to at least `capacity` writable doubles.
enum FvhStatus fvh_field_values(const struct FvhField *field, double *out, size_t capacity);

// Detect phase singularities. `amp_floor_frac` is the trusted-amplitude
// floor as a fraction of the peak modulus (1e-3 is the usual choice).
// Writes up to `capacity` vortices ordered by distance from the origin
// and stores the total detected count; returns `FvhBufferTooSmall` when
// the buffer cannot hold them all (the count is still stored).
//
// # Safety
// `out` must point to at least `capacity` writable entries; `count` must
// be valid.
enum FvhStatus fvh_detect(const struct FvhField *field,
                          double amp_floor_frac,
                          struct FvhVortex *out,
                          size_t capacity,
                          size_t *count);

// Winding of the phase along the discrete circle of `radius` meters.
//
// # Safety
// `out` must be valid.
enum FvhStatus fvh_net_charge(const struct FvhField *field,
                              double radius,
                              double amp_floor_frac,
                              long long *out);

// Full hotel bookkeeping for charge `mu` on the context grid, as a
// NUL-terminated JSON document (same schema as the CLI report). Release
// with [`fvh_string_free`].
//
// # Safety
// `sim` and `out` must be valid.
enum FvhStatus fvh_hotel_report_json(const struct FvhSim *sim, double mu, char **out);

// Release a string returned by this library. Null is a no-op.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void fvh_string_free(char *s);

// Static human-readable description of a status code.
const char *fvh_status_message(enum FvhStatus status);

// Library version as a static NUL-terminated string.
const char *fvh_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FVHOTEL_H */

#ifndef DUALGREEN_H
#define DUALGREEN_H

#include <stdint.h>

typedef enum DgStatus {
  DG_STATUS_OK = 0,
  DG_STATUS_DOMAIN = 1,
  DG_STATUS_POLE = 2,
  DG_STATUS_CONVERGENCE = 3,
  DG_STATUS_OVERFLOW = 4,
  DG_STATUS_ORDERING = 5,
  DG_STATUS_EXPONENT_MISMATCH = 6,
  DG_STATUS_NO_BRACKET = 7,
  DG_STATUS_NULL_POINTER = 8,
  DG_STATUS_PANIC = 9,
} DgStatus;

// Opaque zero-energy state of a confining potential.
typedef struct DgConfinement DgConfinement;

// Opaque duality map `r = C ρ^η`.
typedef struct DgDualityMap DgDualityMap;

// Opaque normalised radial eigenfunction.
typedef struct DgEigenfunction DgEigenfunction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call on the same thread.
const char *dg_last_error_message(void);

// Library version as a static NUL-terminated string.
const char *dg_version(void);

// # Safety
// `out` must be a valid pointer; the handle it receives is owned by the caller.
enum DgStatus dg_map_new(double a, double scale, struct DgDualityMap **out);

// Inverse map as a new handle.
//
// # Safety
// `map` must be a live handle and `out` a valid pointer.
enum DgStatus dg_map_inverse(const struct DgDualityMap *map, struct DgDualityMap **out);

// # Safety
// `map` must come from this library and not be used afterwards. Null is ignored.
void dg_map_free(struct DgDualityMap *map);

// Exponents and scale of the map; any out pointer may be null.
//
// # Safety
// `map` must be a live handle; non-null out pointers must be valid.
enum DgStatus dg_map_parameters(const struct DgDualityMap *map,
                                double *a,
                                double *b,
                                double *eta,
                                double *scale);

// `r` for a given `ρ`.
//
// # Safety
// `map` must be a live handle and `out` a valid pointer.
enum DgStatus dg_map_eval(const struct DgDualityMap *map, double rho, double *out);

// Dual energy and coupling for a primary coupling and energy.
//
// # Safety
// `map` must be a live handle; out pointers must be valid.
enum DgStatus dg_map_dual(const struct DgDualityMap *map,
                          double coupling,
                          double energy,
                          double *dual_energy,
                          double *dual_coupling);

// Oscillator eigenfunction with `n` radial nodes and angular momentum `L`.
//
// # Safety
// `out` must be a valid pointer.
enum DgStatus dg_osc_eigenfunction_new(uint32_t n,
                                       double l,
                                       double omega,
                                       double mass,
                                       double hbar,
                                       struct DgEigenfunction **out);

// Coulomb eigenfunction for `V = -Ze²/r` with `n` radial nodes.
//
// # Safety
// `out` must be a valid pointer.
enum DgStatus dg_coulomb_eigenfunction_new(uint32_t n,
                                           double l,
                                           double zesq,
                                           double mass,
                                           double hbar,
                                           struct DgEigenfunction **out);

// Reduced radial value `u(r)`.
//
// # Safety
// `f` must be a live handle and `out` a valid pointer.
enum DgStatus dg_eigenfunction_eval(const struct DgEigenfunction *f, double r, double *out);

// # Safety
// `f` must be a live handle and `out` a valid pointer.
enum DgStatus dg_eigenfunction_energy(const struct DgEigenfunction *f, double *out);

// # Safety
// `f` must come from this library and not be used afterwards. Null is ignored.
void dg_eigenfunction_free(struct DgEigenfunction *f);

// Zero-energy state with `nu` nodes for `λ_a r^{a'/2-1} + λ' r^{a'}`.
//
// # Safety
// `out` must be a valid pointer.
enum DgStatus dg_confinement_new(double a_prime,
                                 double confining_coupling,
                                 uint32_t nu,
                                 uint32_t ell,
                                 uint32_t dimension,
                                 double mass,
                                 double hbar,
                                 struct DgConfinement **out);

// Quantised primary coupling `λ_{a,ν}`.
//
// # Safety
// `c` must be a live handle and `out` a valid pointer.
enum DgStatus dg_confinement_coupling(const struct DgConfinement *c, double *out);

// Reduced radial value `u(r)`, normalised in `dr`.
//
// # Safety
// `c` must be a live handle and `out` a valid pointer.
enum DgStatus dg_confinement_eval(const struct DgConfinement *c, double r, double *out);

// # Safety
// `c` must come from this library and not be used afterwards. Null is ignored.
void dg_confinement_free(struct DgConfinement *c);

// Closed-form oscillator Green function at energy `E`.
//
// # Safety
// `out` must be a valid pointer.
enum DgStatus dg_osc_green(double rho_outer,
                           double rho_inner,
                           double l,
                           double energy,
                           double omega,
                           double mass,
                           double hbar,
                           double *out);

// Oscillator Green function by quadrature of the promotor.
//
// # Safety
// `out` must be a valid pointer.
enum DgStatus dg_osc_green_quadrature(double rho_outer,
                                      double rho_inner,
                                      double l,
                                      double energy,
                                      double omega,
                                      double mass,
                                      double hbar,
                                      double tol,
                                      double *out);

// Closed-form Coulomb Green function for `V = -Ze²/r`, `E < 0`.
//
// # Safety
// `out` must be a valid pointer.
enum DgStatus dg_coulomb_green(double r_outer,
                               double r_inner,
                               double l,
                               double energy,
                               double zesq,
                               double mass,
                               double hbar,
                               double *out);

// Coulomb Green function assembled from the oscillator through the map.
//
// # Safety
// `out` must be a valid pointer.
enum DgStatus dg_coulomb_green_via_dual(double r_outer,
                                        double r_inner,
                                        double l,
                                        double energy,
                                        double zesq,
                                        double mass,
                                        double hbar,
                                        double *out);

// Oscillator level `ħω(2n + ℓ + 3/2)` in three dimensions.
//
// # Safety
// `out` must be a valid pointer.
enum DgStatus dg_osc_spectrum(uint32_t n, uint32_t ell, double omega, double hbar, double *out);

// Coulomb level `-m(Ze²)²/(2ħ²(n + ℓ + 1)²)` in three dimensions.
//
// # Safety
// `out` must be a valid pointer.
enum DgStatus dg_coulomb_spectrum(uint32_t n,
                                  uint32_t ell,
                                  double zesq,
                                  double mass,
                                  double hbar,
                                  double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DUALGREEN_H */

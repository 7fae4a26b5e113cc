/* C ABI for the dynalg toolkit.
 *
 * Conventions:
 *   - Representations and states are opaque handles created by the
 *     dynalg_rep_* / dynalg_state_* constructors and released with the
 *     matching _free function. Freeing NULL is a no-op.
 *   - Every fallible function returns an int32_t drawn from DynalgStatus
 *     and reports results through out-pointers, written only on DYNALG_OK.
 *     On failure a thread-local message is set; fetch it with
 *     dynalg_last_error(). Success clears the message.
 *   - Complex vectors cross the boundary as interleaved doubles
 *     [re0, im0, re1, im1, ...].
 *   - Panics inside the library never unwind across the boundary; they
 *     surface as DYNALG_PANIC.
 *
 * Handles are not synchronized; share one across threads only under an
 * external lock.
 */

#ifndef DYNALG_H
#define DYNALG_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum DynalgStatus {
  DYNALG_OK = 0,
  DYNALG_NULL_ARGUMENT = 1,
  DYNALG_INVALID_ARGUMENT = 2,
  DYNALG_NUMERICAL_DRIFT = 3,
  DYNALG_PANIC = 4,
} DynalgStatus;

/* Opaque handle to an irreducible representation. */
typedef struct DynalgRep DynalgRep;

/* Opaque handle to a normalized state vector. */
typedef struct DynalgState DynalgState;

/* --- representations ---------------------------------------------------- */

/* Spin-j irrep of su(2); two_j is 2j and must be at least 1. */
int32_t dynalg_rep_su2(uint32_t two_j, DynalgRep **out);

/* Symmetric irrep (N, 0) of su(3) on N bosons in three modes; n_bosons >= 1. */
int32_t dynalg_rep_su3_symmetric(uint32_t n_bosons, DynalgRep **out);

/* Fundamental (defining) irrep of u(N); n_modes >= 2. */
int32_t dynalg_rep_un_fundamental(uint32_t n_modes, DynalgRep **out);

/* k-particle fermionic sector of u(N); needs n_modes >= 2 and
 * 1 <= n_particles < n_modes. */
int32_t dynalg_rep_un_fermion(uint32_t n_modes, uint32_t n_particles,
                              DynalgRep **out);

/* Two independent spins, su(2) (+) su(2) acting on the tensor product. */
int32_t dynalg_rep_spin_pair(uint32_t two_j1, uint32_t two_j2,
                             DynalgRep **out);

/* Release a representation handle. NULL is a no-op. */
void dynalg_rep_free(DynalgRep *rep);

/* Hilbert-space dimension, or 0 if rep is NULL. */
size_t dynalg_rep_dim(const DynalgRep *rep);

/* Number of orthonormal Hermitian generators, or 0 if rep is NULL. */
size_t dynalg_rep_generator_count(const DynalgRep *rep);

/* Number of coset ladder pairs used by displacement, or 0 if rep is NULL. */
size_t dynalg_rep_ladder_count(const DynalgRep *rep);

/* --- states ------------------------------------------------------------- */

/* Extremal-weight reference state of the representation. */
int32_t dynalg_state_reference(const DynalgRep *rep, DynalgState **out);

/* su(2) coherent state at Bloch angles (theta, phi). Only valid for
 * single-spin representations. */
int32_t dynalg_state_coherent_su2(const DynalgRep *rep, double theta,
                                  double phi, DynalgState **out);

/* Displace the reference state: exp(sum_i alpha_i E_i+ - conj(alpha_i) E_i-)
 * applied to |ref>. alphas_re_im holds n_pairs interleaved complex
 * parameters; n_pairs must equal dynalg_rep_ladder_count(rep). */
int32_t dynalg_state_displace(const DynalgRep *rep, const double *alphas_re_im,
                              size_t n_pairs, DynalgState **out);

/* Build a state from len = 2*dim interleaved amplitudes. The vector must
 * already be normalized. */
int32_t dynalg_state_from_amplitudes(const DynalgRep *rep,
                                     const double *amps_re_im, size_t len,
                                     DynalgState **out);

/* Copy the amplitudes out as interleaved doubles. len is the capacity of
 * out_re_im in doubles and must be at least 2*dim. */
int32_t dynalg_state_amplitudes(const DynalgState *state, double *out_re_im,
                                size_t len);

/* State dimension, or 0 if state is NULL. */
size_t dynalg_state_dim(const DynalgState *state);

/* Release a state handle. NULL is a no-op. */
void dynalg_state_free(DynalgState *state);

/* --- coherence measures -------------------------------------------------- */

/* Total fluctuation Delta(psi) = sum_i (<L_i^2> - <L_i>^2) over the
 * orthonormal generators. */
int32_t dynalg_delta(const DynalgRep *rep, const DynalgState *state,
                     double *out);

/* Minimal Delta over pure states, attained exactly on the coherent orbit. */
int32_t dynalg_delta_min(const DynalgRep *rep, double *out);

/* Generalized entanglement max(Delta(psi) - Delta_min, 0). */
int32_t dynalg_g_entanglement(const DynalgRep *rep, const DynalgState *state,
                              double *out);

/* Number of independent degrees of freedom counted along the named CSCO
 * chain. Known ids: "su2-Jz", "su2xsu2-alpha", "su2-collective-x",
 * "su3-isospin", "uN-tower", "uN-fermion-free". */
int32_t dynalg_idf(const DynalgRep *rep, const char *chain_id, size_t *out);

/* --- experiments ---------------------------------------------------------- */

/* Classify the runs described by an experiment config given as JSON text.
 * Produces the same "verdict=... reason=... residual=..." lines as the CLI,
 * one per run, joined with '\n' and prefixed with "run=<label>" when the
 * config expands to several runs. The returned string is owned by the
 * caller; release it with dynalg_string_free(). */
int32_t dynalg_classify_json(const char *config_json, char **out_line);

/* Release a string returned by this library. NULL is a no-op. */
void dynalg_string_free(char *s);

/* --- errors --------------------------------------------------------------- */

/* Message for the most recent failure on the calling thread, or NULL if the
 * last call succeeded. The pointer stays valid until the next library call
 * on the same thread. */
const char *dynalg_last_error(void);

#ifdef __cplusplus
}
#endif

#endif /* DYNALG_H */

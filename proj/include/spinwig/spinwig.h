#ifndef SPINWIG_H
#define SPINWIG_H

/* Wigner negativity of pure spin states: C interface.
 *
 * Every function returns an sw_status. On failure a message is available
 * from sw_last_error() until the next call on the same thread. Strings
 * returned through char** are heap-allocated and must be released with
 * sw_free(). State handles are immutable and may be shared across threads. */

#include <stddef.h>

#if defined(_WIN32)
#define SW_API __declspec(dllexport)
#elif defined(__GNUC__)
#define SW_API __attribute__((visibility("default")))
#else
#define SW_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sw_status {
  SW_OK = 0,
  SW_ERR_INVALID_ARGUMENT = 1,
  SW_ERR_PARSE = 2,
  SW_ERR_ZERO_STATE = 3,
  SW_ERR_NOT_CONVERGED = 4,
  SW_ERR_UNKNOWN_NAME = 5,
  SW_ERR_GRID_MISMATCH = 6,
  SW_ERR_UNDER_RESOLVED = 7,
  SW_ERR_INTERNAL = 100
} sw_status;

typedef enum sw_format { SW_FORMAT_JSON = 0, SW_FORMAT_CSV = 1 } sw_format;

typedef struct sw_state sw_state;

SW_API const char *sw_version(void);
SW_API const char *sw_last_error(void);
SW_API void sw_free(char *text);

/* "5/2", "2.5" or "3" -> 2j. */
SW_API sw_status sw_parse_spin(const char *text, int *twice_j);

/* Amplitudes ordered m = -j..j as interleaved (re, im); n_amps = 2j + 1. */
SW_API sw_status sw_state_from_amplitudes(int twice_j, const double *re_im, size_t n_amps,
                                          sw_state **out);
/* Stars as interleaved (theta, phi); n_stars = 2j. */
SW_API sw_status sw_state_from_stars(const double *theta_phi, size_t n_stars, sw_state **out);
/* {"twice_j": n, "amps": [[re, im], ...]} or {"twice_j": n, "stars": [[theta, phi], ...]}. */
SW_API sw_status sw_state_from_json(const char *json, sw_state **out);
/* Catalog name; twice_j <= 0 when the name carries its own spin. */
SW_API sw_status sw_state_named(const char *name, int twice_j, sw_state **out);
SW_API void sw_state_destroy(sw_state *state);

SW_API sw_status sw_state_twice_j(const sw_state *state, int *twice_j);
/* capacity counts complex amplitudes (resp. stars). */
SW_API sw_status sw_state_amplitudes(const sw_state *state, double *re_im, size_t capacity);
SW_API sw_status sw_state_stars(const sw_state *state, double *theta_phi, size_t capacity);
/* as_stars != 0 writes the constellation schema. */
SW_API sw_status sw_state_to_json(const sw_state *state, int as_stars, char **out);
SW_API sw_status sw_state_fidelity(const sw_state *a, const sw_state *b, double *out);
/* Active rotation Rz(alpha) Ry(beta) Rz(gamma). */
SW_API sw_status sw_state_rotate(const sw_state *state, double alpha, double beta, double gamma,
                                 sw_state **out);

SW_API sw_status sw_negativity(const sw_state *state, double rel_tol, double *out);
/* {"negativity", "panels", "levels": [{"n_theta", "estimate"}, ...]} */
SW_API sw_status sw_negativity_report(const sw_state *state, double rel_tol, char **json);
SW_API sw_status sw_wigner_at(const sw_state *state, double theta, double phi, double *out);
/* Gauss-Legendre rings in cos(theta) x uniform phi. CSV rows: theta,phi,W. */
SW_API sw_status sw_wigner_grid(const sw_state *state, int n_theta, int n_phi, sw_format format,
                                char **out);
SW_API sw_status sw_measures(const sw_state *state, double rel_tol, char **json);
SW_API sw_status sw_catalog(char **json);

/* Request object:
 *   {"twice_j": n, "constraint": "none" | "tetra-snap" | "pyramid" | "two-triangles"
 *                                | "minimize" | "thomson" | "polish",
 *    "starts": int, "seed": int, "threads": int (0 = auto), "tol": real,
 *    "grid": int (landscape points per axis), "start": constellation (polish)}
 * table receives the sweep or landscape CSV when the mode produces one, and
 * NULL otherwise; it may itself be NULL. */
SW_API sw_status sw_search(const char *request, char **json, char **table);

/* Request object:
 *   {"twice_j": n, "n": int, "seed": int, "threads": int, "bins": int,
 *    "measure": "negativity" | "entropy"}
 * json receives the batch statistics, histogram the CSV (may be NULL). */
SW_API sw_status sw_sample(const char *request, char **json, char **histogram);

#ifdef __cplusplus
}
#endif

#endif

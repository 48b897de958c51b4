/* SPDX-License-Identifier: Apache-2.0
 *
 * slpcr — symbol-level precoding simulator for an overlay cognitive-radio
 * downlink. C API of the shared library: opaque handles plus status
 * codes; every non-trivial call reports failure through its return code
 * and leaves a message readable via slpcr_last_error().
 *
 * Handles returned by *_create / *_train / slpcr_run / slpcr_sweep are
 * owned by the caller and released with the matching *_destroy.
 */
#ifndef SLPCR_SLPCR_H
#define SLPCR_SLPCR_H

#include <stddef.h>

#if defined(_WIN32)
#define SLPCR_API __declspec(dllexport)
#else
#define SLPCR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum slpcr_status {
  SLPCR_OK = 0,
  SLPCR_ERR_INVALID = 1,  /* bad argument or null handle */
  SLPCR_ERR_CONFIG = 2,   /* unparsable or inconsistent configuration */
  SLPCR_ERR_RUNTIME = 3,  /* numerical or I/O failure during execution */
} slpcr_status;

typedef struct slpcr_config slpcr_config;
typedef struct slpcr_table slpcr_table;
typedef struct slpcr_quantizer slpcr_quantizer;

SLPCR_API const char* slpcr_version(void);

/* Message for the most recent failure on this thread; empty on success. */
SLPCR_API const char* slpcr_last_error(void);

/* ---- simulation configuration ---------------------------------------- */

/* New configuration with the built-in defaults (QPSK, 8 antennas,
 * 4 + 4 users, 200 realizations of 50 slots). */
SLPCR_API slpcr_config* slpcr_config_create(void);
SLPCR_API void slpcr_config_destroy(slpcr_config* cfg);

/* Load "key = value" lines; '#' starts a comment. Unknown keys fail. */
SLPCR_API slpcr_status slpcr_config_load(slpcr_config* cfg, const char* path);

/* Set a single documented key from its text form. */
SLPCR_API slpcr_status slpcr_config_set(slpcr_config* cfg, const char* key,
                                        const char* value);

/* ---- running ---------------------------------------------------------- */

/* Monte-Carlo run of one configuration; the result is a 1-row table. */
SLPCR_API slpcr_status slpcr_run(const slpcr_config* cfg, slpcr_table** out);

/* Named sweep preset. overrides is an array of "key=value" strings
 * applied to every point ("max_points=N" truncates the grid). Presets:
 * fig5-power-sweep, fig6to9-epsilon-sweep, fig10to12-sm-sweep,
 * fig13-bit-allocation. */
SLPCR_API slpcr_status slpcr_sweep(const char* preset,
                                   const char* const* overrides,
                                   size_t n_overrides, slpcr_table** out);

/* ---- result tables ----------------------------------------------------- */

SLPCR_API size_t slpcr_table_rows(const slpcr_table* table);

/* Scalar metric of one row. Names: ber_pu, ber_cu, bler_pu, bler_cu,
 * tau, power_dbw, ee, outage_frac, ci_ber_pu, ci_ber_cu,
 * mean_power_watts, outage_slots, total_slots, sweep_value. */
SLPCR_API slpcr_status slpcr_table_metric(const slpcr_table* table,
                                          size_t row, const char* name,
                                          double* out);

/* Fixed-layout CSV; path == NULL writes to stdout. */
SLPCR_API slpcr_status slpcr_table_write_csv(const slpcr_table* table,
                                             const char* path);

SLPCR_API void slpcr_table_destroy(slpcr_table* table);

/* ---- Lloyd-Max quantizer ---------------------------------------------- */

/* Train the unit-variance Gaussian codebook for 1..5 bits. */
SLPCR_API slpcr_status slpcr_quantizer_train(int bits, slpcr_quantizer** out);

SLPCR_API slpcr_status slpcr_quantizer_export(const slpcr_quantizer* q,
                                              const char* path);
SLPCR_API slpcr_status slpcr_quantizer_import(const char* path,
                                              slpcr_quantizer** out);

SLPCR_API slpcr_status slpcr_quantizer_mse(const slpcr_quantizer* q,
                                           double* out);
SLPCR_API int slpcr_quantizer_bits(const slpcr_quantizer* q);

SLPCR_API void slpcr_quantizer_destroy(slpcr_quantizer* q);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SLPCR_SLPCR_H */

#ifndef HILBERT_SELBERG_H
#define HILBERT_SELBERG_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define HS_API __attribute__((visibility("default")))
#else
#define HS_API
#endif

/* Status codes; the CLI uses them as exit codes. */
typedef enum {
    HS_OK = 0,
    HS_VALIDATION = 1, /* bad input, domain error, pole, unsupported field */
    HS_BUDGET = 2,     /* search or truncation budget exhausted */
    HS_INVARIANT = 3   /* internal cross-check failed */
} hs_status;

typedef struct hs_field hs_field;
typedef struct hs_geodesics hs_geodesics;

/* Message of the last failing call on this thread, "" after a success. */
HS_API const char* hs_last_error(void);
/* Frees strings returned through char** outputs. */
HS_API void hs_string_free(char* s);
HS_API const char* hs_version(void);
/* Parses "2", "-1.5", "2.5+0.3i", "0.5i", "1-i". */
HS_API hs_status hs_parse_complex(const char* text, double* re, double* im);

/* Field context. elliptic_height <= 0 selects the default search height. */
HS_API hs_status hs_field_create(int D, long long elliptic_height, hs_field** out);
HS_API void hs_field_free(hs_field* field);
HS_API hs_status hs_field_json(const hs_field* field, char** out);
HS_API hs_status hs_field_default_height(int D, long long* out);

/* Search caps of the class-number and geodesic enumeration. */
typedef struct {
    long long form_height;     /* floor of the |N(a)| cap */
    double height_per_root;    /* cap grows as this times sqrt|N(d)| */
    int mu_box;                /* translation search half-width */
    double oracle_height;      /* matrix-oracle entry box */
    int cross_check;           /* nonzero runs the matrix-conjugacy oracle */
    double cross_check_below;  /* ... for eps_d up to this */
    double trace_box_scale;    /* widening of the trace box */
} hs_search_options;

HS_API void hs_search_options_default(hs_search_options* opt);

/* Pell solution and class number of one d ("a+b*w"), as JSON. */
HS_API hs_status hs_pell_json(const hs_field* field, const char* d, const hs_search_options* opt, char** out);
/* Table of canonical d with eps_d <= x: d, eps_d, t0, u0, h. */
HS_API hs_status hs_pell_csv(const hs_field* field, double x, const hs_search_options* opt, char** out);
/* Reduced-form class representatives of one d, as JSON. */
HS_API hs_status hs_forms_json(const hs_field* field, const char* d, const hs_search_options* opt, char** out);

/* Primitive hyperbolic-elliptic classes with eps_d <= x. */
HS_API hs_status hs_geodesics_create(const hs_field* field, double x, const hs_search_options* opt, hs_geodesics** out);
/* Rebuild a class list from its CSV form. */
HS_API hs_status hs_geodesics_from_csv(const hs_field* field, double x, const char* csv, hs_geodesics** out);
HS_API void hs_geodesics_free(hs_geodesics* list);
HS_API hs_status hs_geodesics_csv(const hs_geodesics* list, char** out);
HS_API hs_status hs_geodesics_size(const hs_geodesics* list, size_t* classes, long long* total_multiplicity);

/* Truncated Euler product Z(s; m) with X = trunc_norm, K = trunc_k. X <= 0 takes x^2 of the list. */
HS_API hs_status hs_zeta_json(const hs_field* field, const hs_geodesics* list, int m, double s_re, double s_im,
                              double trunc_norm, int trunc_k, char** out);
/* Ruelle zeta as Z(s;2)/Z(s+1;2) and as a direct product. */
HS_API hs_status hs_ruelle_json(const hs_geodesics* list, double s_re, double s_im, double trunc_norm, int trunc_k,
                                char** out);
/* Zeros and poles of the completed zeta at real points down to -k_max. */
HS_API hs_status hs_ledger_json(const hs_field* field, int m, int k_max, char** out);

/* Geometric side of the trace formula. kind is "double" (weights m, m-2, m-4) or "difference" (m, m-2).
   test is "gaussian:beta=..." or "rational:s=...,beta1=...,beta2=...". */
HS_API hs_status hs_trace_json(const hs_field* field, const hs_geodesics* list, const char* kind, int m, const char* test,
                               double h2_weight, char** out);
/* Heat-kernel fit a/beta + b/sqrt(beta) + c over the given widths. */
HS_API hs_status hs_heatfit_json(const hs_field* field, const hs_geodesics* list, const double* betas, size_t n,
                                 char** out);
/* kind "pgt" or "classavg"; format "csv" or "json". */
HS_API hs_status hs_report(const hs_geodesics* list, const char* kind, const double* grid, size_t n, const char* format,
                           char** out);

/* Acceptance criterion id in 1..10. pass receives 0 or 1; out receives one JSON object. */
HS_API int hs_check_count(void);
HS_API hs_status hs_check_run(int id, unsigned seed, int* pass, char** out);

#ifdef __cplusplus
}
#endif

#endif

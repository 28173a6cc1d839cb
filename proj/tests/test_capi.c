/* The public header compiled as C, and the status and ownership rules. */
#include <stdio.h>
#include <string.h>

#include "hilbert_selberg/hilbert_selberg.h"

static int failures = 0;

#define EXPECT(cond)                                                  \
    do {                                                              \
        if (!(cond)) {                                                \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                               \
        }                                                             \
    } while (0)

int main(void)
{
    hs_field* field = NULL;
    EXPECT(hs_field_create(5, 0, &field) == HS_OK);
    EXPECT(strcmp(hs_last_error(), "") == 0);

    char* text = NULL;
    EXPECT(hs_field_json(field, &text) == HS_OK);
    EXPECT(strstr(text, "\"zeta_minus_one\": \"1/30\"") != NULL);
    EXPECT(strstr(text, "\"euler_char\": 4") != NULL);
    hs_string_free(text);

    hs_field* bad = NULL;
    EXPECT(hs_field_create(7, 0, &bad) == HS_VALIDATION);
    EXPECT(bad == NULL);
    EXPECT(strlen(hs_last_error()) > 0);
    EXPECT(hs_field_json(NULL, &text) == HS_VALIDATION);

    hs_search_options opt;
    hs_search_options_default(&opt);
    EXPECT(opt.form_height == 30 && opt.mu_box == 3 && opt.cross_check == 1);

    hs_geodesics* list = NULL;
    EXPECT(hs_geodesics_create(field, 1.0, &opt, &list) == HS_OK);
    size_t n = 99;
    long long total = -1;
    EXPECT(hs_geodesics_size(list, &n, &total) == HS_OK);
    EXPECT(n == 0 && total == 0);
    hs_geodesics_free(list);

    EXPECT(hs_geodesics_create(field, 10.0, &opt, &list) == HS_OK);
    EXPECT(hs_geodesics_size(list, &n, &total) == HS_OK);
    EXPECT(total == 48);
    char* csv = NULL;
    EXPECT(hs_geodesics_csv(list, &csv) == HS_OK);
    hs_geodesics* back = NULL;
    EXPECT(hs_geodesics_from_csv(field, 10.0, csv, &back) == HS_OK);
    char* csv2 = NULL;
    EXPECT(hs_geodesics_csv(back, &csv2) == HS_OK);
    EXPECT(strcmp(csv, csv2) == 0);
    hs_string_free(csv);
    hs_string_free(csv2);
    hs_geodesics_free(back);

    EXPECT(hs_zeta_json(field, list, 4, 2.0, 0.5, 0, 40, &text) == HS_OK);
    EXPECT(strstr(text, "\"tail_bound\"") != NULL);
    hs_string_free(text);
    EXPECT(hs_zeta_json(field, list, 4, 2.0, 0.5, 1e4, 40, &text) == HS_VALIDATION);
    EXPECT(hs_zeta_json(field, list, 3, 2.0, 0.5, 0, 40, &text) == HS_VALIDATION);

    /* a wide Gaussian needs classes far beyond eps_d = 10 */
    EXPECT(hs_trace_json(field, list, "double", 2, "gaussian:beta=3", 1.0, &text) == HS_BUDGET);
    EXPECT(strstr(hs_last_error(), "are required") != NULL);
    EXPECT(hs_trace_json(field, list, "triple", 2, "gaussian:beta=0.05", 1.0, &text) == HS_VALIDATION);

    double re = 0, im = 0;
    EXPECT(hs_parse_complex("2.0+0.5i", &re, &im) == HS_OK);
    EXPECT(re == 2.0 && im == 0.5);
    EXPECT(hs_parse_complex("two", &re, &im) == HS_VALIDATION);

    double grid[] = {5, 10};
    EXPECT(hs_report(list, "pgt", grid, 2, "csv", &text) == HS_OK);
    EXPECT(strncmp(text, "x,pi_sum", 8) == 0);
    hs_string_free(text);
    double beyond[] = {20};
    EXPECT(hs_report(list, "pgt", beyond, 1, "csv", &text) == HS_VALIDATION);

    EXPECT(hs_ledger_json(field, 2, 5, &text) == HS_OK);
    hs_string_free(text);

    int pass = -1;
    EXPECT(hs_check_count() == 10);
    EXPECT(hs_check_run(1, 1, &pass, &text) == HS_OK);
    EXPECT(pass == 1);
    hs_string_free(text);
    EXPECT(hs_check_run(11, 1, &pass, &text) == HS_VALIDATION);

    hs_geodesics_free(list);
    hs_field_free(field);
    hs_string_free(NULL);
    if (failures) fprintf(stderr, "%d failures\n", failures);
    return failures ? 1 : 0;
}

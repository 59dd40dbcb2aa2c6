/* cc smoke.c -I../include ../../../target/release/libpropgraph_ffi.a -lpthread -ldl -lm */
#include <stdio.h>
#include <math.h>
#include "propgraph.h"

int main(void) {
    const double a[] = {1, 1, 0, -1, -1, 1, 1, 2, 0, -1};
    const double b[] = {0, 1, 1, 0, -1, 1, 1, 1, 2, 0};
    PgDataset *ds = pg_dataset_new();
    if (pg_dataset_push(ds, "i", a, 10) != PG_STATUS_OK ||
        pg_dataset_push(ds, "j", b, 10) != PG_STATUS_OK) {
        fprintf(stderr, "push: %s\n", pg_last_error_message());
        return 1;
    }

    PgAlignConfig cfg = pg_align_config_default();
    PgAlignment *al = NULL;
    if (pg_align(ds, 0, 1, &cfg, &al) != PG_STATUS_OK) {
        fprintf(stderr, "align: %s\n", pg_last_error_message());
        return 1;
    }
    char *count = pg_alignment_count(al);
    printf("cost %g, %s alignments, average delay %g\n",
           pg_alignment_min_cost(al), count, pg_alignment_avg_delay(al));
    pg_string_free(count);
    pg_alignment_free(al);

    PgEstimateConfig ecfg = pg_estimate_config_default();
    PgEstimate *est = NULL;
    if (pg_estimate(ds, PG_METHOD_PROPOSED, &cfg, &ecfg, &est) != PG_STATUS_OK) {
        fprintf(stderr, "estimate: %s\n", pg_last_error_message());
        return 1;
    }
    PgEdge e;
    for (size_t k = 0; k < pg_estimate_num_edges(est); k++) {
        pg_estimate_edge(est, k, &e);
        printf("edge %zu -> %zu (%g)\n", e.src, e.dst, e.ad);
    }
    pg_estimate_free(est);
    pg_dataset_free(ds);
    return 0;
}

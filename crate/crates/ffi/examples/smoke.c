/* Minimal C consumer: fit the fixture and print the coefficient table. */
#include <stdio.h>
#include "twinreg.h"

int main(int argc, char **argv) {
    if (argc < 2) {
        fprintf(stderr, "usage: %s data.csv\n", argv[0]);
        return 2;
    }
    TwinregFrame *frame = NULL;
    if (twinreg_frame_from_csv(argv[1], &frame) != TWINREG_STATUS_OK) {
        fprintf(stderr, "error: %s\n", twinreg_last_error());
        return 1;
    }
    TwinregOls *ols = NULL;
    TwinregStatus st = twinreg_ols_fit(frame, &ols);
    if (st != TWINREG_STATUS_OK) {
        fprintf(stderr, "error (%d): %s\n", (int)st, twinreg_last_error());
        twinreg_frame_free(frame);
        return 1;
    }
    for (size_t i = 0; i < twinreg_ols_term_count(ols); i++) {
        TwinregCoef c;
        twinreg_ols_term(ols, i, &c);
        printf("%s %.6g %.6g %.3e\n", twinreg_ols_term_name(ols, i), c.estimate, c.std_error, c.p_value);
    }
    printf("adj_r2 %.4f rows %zu\n", twinreg_ols_adj_r2(ols), twinreg_frame_rows(frame));
    twinreg_ols_free(ols);
    twinreg_frame_free(frame);
    return 0;
}

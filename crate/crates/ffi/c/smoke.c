#include <math.h>
#include <stdio.h>
#include "holophase.h"

static int plane_only(void *ctx, const double *x, double *out) {
    (void)ctx;
    (void)x;
    *out = 1.0;
    return 0;
}

int main(void) {
    const double k[3] = {0.0, 0.0, 1.0};
    const double center[3] = {0.0, 0.0, 0.0};
    const double x0[3] = {0.0, 0.0, 0.0};
    const double dir[3] = {1.0, 0.0, 0.0};
    const double grid[3] = {100.0, 200.0, 400.0};
    HpScene *scene = NULL;
    HpReport *report = NULL;
    double re = 0.0, im = 0.0;

    if (hp_scene_new(k, center, 1.0, &scene) != HP_STATUS_OK) return 10;
    if (hp_scene_add_mode(scene, 0, 0, 0.5, 0.0) != HP_STATUS_OK) return 11;

    HpPlan plan = {grid, 3, 0.0, 1, true, true, 0.0, 0.0, true};
    if (hp_recover_scene(scene, x0, dir, &plan, &report) != HP_STATUS_OK) {
        fprintf(stderr, "%s\n", hp_last_error_message());
        return 12;
    }
    if (hp_report_len(report) != 1) return 13;
    if (hp_report_coefficient(report, 0, &re, &im) != HP_STATUS_OK) return 14;
    /* 0.5 * Y00 * (-i): f1 = -i * 0.5 / sqrt(4 pi) */
    if (fabs(re) > 1e-6 || fabs(im + 0.5 / sqrt(4.0 * M_PI)) > 1e-6) return 15;
    if (hp_report_coefficient(report, 5, &re, &im) != HP_STATUS_INDEX_OUT_OF_RANGE) return 16;
    hp_report_free(report);
    report = NULL;

    if (hp_recover_callback(plane_only, NULL, k, x0, dir, &plan, &report) != HP_STATUS_OK) return 17;
    if (hp_report_coefficient(report, 0, &re, &im) != HP_STATUS_OK) return 18;
    if (hypot(re, im) > 1e-12) return 19;
    hp_report_free(report);

    const double along_k[3] = {0.0, 0.0, 1.0};
    if (hp_recover_scene(scene, x0, along_k, &plan, &report) != HP_STATUS_DEGENERATE_DIRECTION) return 20;
    if (hp_last_error_message() == NULL) return 21;

    hp_scene_free(scene);
    printf("ok\n");
    return 0;
}

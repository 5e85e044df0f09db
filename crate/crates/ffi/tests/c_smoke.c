#include <math.h>
#include <stdio.h>
#include "mcpsd.h"

int main(void) {
    McpsdPattern *p = NULL;
    McpsdSystem *s = NULL;
    McpsdDiagnostics d;
    double x[4 * 300];
    double v[8];
    McpsdSolveInfo info;
    size_t offsets[4] = {0, 1, 3, 7};
    size_t i;

    if (mcpsd_pattern_ruler(10, 64, &p) != MCPSD_STATUS_OK) return 1;
    if (mcpsd_pattern_diagnose(p, &d) != MCPSD_STATUS_OK || !d.full_rank) return 2;
    mcpsd_pattern_free(p);

    if (mcpsd_pattern_new(8, offsets, 4, &p) != MCPSD_STATUS_OK) return 3;
    if (mcpsd_system_new(p, &s) != MCPSD_STATUS_OK) return 4;
    /* constant channels: all power in the DC subband (m = 0, column L/2 - 1) */
    for (i = 0; i < 4 * 300; i++) x[i] = 2.0;
    if (mcpsd_estimate(s, x, 300, 16, MCPSD_SOLVER_LS, v, 8, &info) != MCPSD_STATUS_OK) return 5;
    for (i = 0; i < 8; i++) {
        double want = i == 3 ? 4.0 : 0.0;
        if (fabs(v[i] - want) > 1e-3) return 6;
    }
    if (mcpsd_estimate(s, x, 300, 16, MCPSD_SOLVER_LS, v, 2, NULL) != MCPSD_STATUS_BUFFER_TOO_SMALL) return 7;
    if (mcpsd_last_error()[0] == '\0') return 8;
    mcpsd_system_free(s);
    mcpsd_pattern_free(p);
    printf("ok %s\n", mcpsd_version());
    return 0;
}

#include <stdio.h>
#include "wmhn.h"
int main(void) {
    WmhnTopology *t = NULL;
    if (wmhn_topology_generate(6, 1, &t) != WMHN_STATUS_OK) return 1;
    WmhnReport *r = NULL;
    if (wmhn_run(t, WMHN_ALGORITHM_CDP, 0, &r) != WMHN_STATUS_OK) return 2;
    printf("front %zu routes, %.0f cfes\n", wmhn_report_opf_len(r), wmhn_report_parallel_cfes(r));
    wmhn_report_free(r); wmhn_topology_free(t);
    return 0;
}

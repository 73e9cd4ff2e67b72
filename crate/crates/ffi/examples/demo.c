/* SPDX-License-Identifier: Apache-2.0 */
/* Build: cc examples/demo.c -Iinclude -L../../target/debug -lhsmetro_ffi -lm -lpthread -ldl */
#include <stdio.h>

#include "hsmetro.h"

static int fail(HmStatus s) {
    char msg[256];
    hm_last_error_message(msg, sizeof msg);
    fprintf(stderr, "status %d: %s\n", (int)s, msg);
    return 1;
}

int main(void) {
    const char *src = "modes 2\nbs 1 2 0.7*phi\nps 1 0.3*phi\nps 2 0.1*phi\n";
    HmNetwork *net = NULL;
    HmUnitary *fixed = NULL;
    HmPlan *plan = NULL;
    HmStatus s;
    double fi, theta, bound;

    if ((s = hm_network_parse(src, &net)) != HM_STATUS_OK) return fail(s);
    if ((s = hm_unitary_dft(2, &fixed)) != HM_STATUS_OK) return fail(s);
    if ((s = hm_plan_build(net, fixed, 1.0, 0.25, 1e4, HM_SIDE_ADAPT_OUTPUT, &plan)) != HM_STATUS_OK)
        return fail(s);
    hm_plan_theta(plan, &theta);
    if ((s = hm_plan_exact_fisher(plan, net, 1.0, &fi)) != HM_STATUS_OK) return fail(s);
    hm_cramer_rao(200.0 * fi, &bound);
    printf("hsmetro %s: theta %.6f, fisher %.6e, bound for 200 outcomes %.3e\n", hm_version(), theta, fi, bound);

    s = hm_network_parse("modes 2\nbs 1 3 phi\n", &net);
    if (s == HM_STATUS_PARSE) {
        char msg[256];
        hm_last_error_message(msg, sizeof msg);
        printf("rejected: %s\n", msg);
    }

    hm_plan_free(plan);
    hm_unitary_free(fixed);
    hm_network_free(net);
    return 0;
}

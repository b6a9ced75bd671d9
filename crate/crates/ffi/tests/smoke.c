#include <stdio.h>
#include <string.h>

#include "mcmulticast.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "check failed: %s (line %d)\n", #cond, __LINE__); \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    const char *text =
        "instance 6 2 2\n"
        "0 0 : 0 1\n"
        "0 1 : 1 2 3\n"
        "1 1 : 2 3 4 5\n";
    McmInstance *inst = NULL;
    CHECK(mcm_instance_parse(text, &inst) == MCM_STATUS_OK);

    McmResult *cga = NULL;
    CHECK(mcm_solve(inst, MCM_POLICY_CGA, 0, &cga) == MCM_STATUS_OK);
    CHECK(mcm_result_served_count(cga) == 6);
    size_t prb = 0;
    CHECK(mcm_result_chosen_prb(cga, 1, &prb) == MCM_STATUS_OK && prb == 1);

    McmResult *dga = NULL;
    CHECK(mcm_solve(inst, MCM_POLICY_DGA, 0, &dga) == MCM_STATUS_OK);
    CHECK(mcm_result_served_count(dga) == 5);
    CHECK(!mcm_result_is_served(dga, 0));

    McmResult *none = NULL;
    CHECK(mcm_solve(inst, MCM_POLICY_EXACT, 2, &none) == MCM_STATUS_CAP_EXCEEDED);
    CHECK(strstr(mcm_last_error_message(), "cap") != NULL);

    CHECK(mcm_path_loss_db(1.0) == 128.1);

    mcm_result_free(cga);
    mcm_result_free(dga);
    mcm_instance_free(inst);
    printf("smoke ok %s\n", mcm_version());
    return 0;
}

#include <stdio.h>
#include <string.h>
#include "egz.h"

#define CHECK(cond)                                                     \
    do {                                                                \
        if (!(cond)) {                                                  \
            fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__,     \
                    #cond, egz_last_error());                           \
            return 1;                                                   \
        }                                                               \
    } while (0)

int main(void) {
    EgzGroup *g = NULL;
    CHECK(egz_group_parse("Z3^2", &g) == EGZ_STATUS_OK);
    uint64_t s = 0, eta = 0;
    CHECK(egz_exact_s(g, &s) == EGZ_STATUS_OK && s == 9);
    CHECK(egz_exact_eta(g, &eta) == EGZ_STATUS_OK && eta == 7);

    char *text = NULL;
    CHECK(egz_group_render(g, &text) == EGZ_STATUS_OK);
    CHECK(strcmp(text, "Z3^2") == 0);
    egz_string_free(text);

    uint64_t coords[] = {1, 0, 1, 0, 1, 0};
    bool found = false;
    size_t witness[3], wl = 0;
    CHECK(egz_find_zero_sum(g, coords, 3, true, 3, &found, witness, &wl) == EGZ_STATUS_OK);
    CHECK(found && wl == 3);
    egz_group_free(g);

    CHECK(egz_group_parse("Z1", &g) == EGZ_STATUS_PARSE);
    CHECK(strlen(egz_last_error()) > 0);

    double gamma = 0;
    CHECK(egz_naslund_gamma(2, 2, 0, &gamma) == EGZ_STATUS_OK);
    CHECK(gamma > 1.999999 && gamma < 2.000001);
    puts("ok");
    return 0;
}

#include <frobkit.h>

#include <stdio.h>
#include <string.h>

int main(void)
{
    frobkit_expr* e = NULL;
    double p[3] = {1.0, 2.0, 3.0};
    double v = 0.0;
    if (frobkit_expr_parse("x + y*z", 3, &e) != FROBKIT_OK) return 1;
    if (frobkit_expr_eval(e, p, &v) != FROBKIT_OK || v != 7.0) return 1;
    frobkit_expr_free(e);
    if (frobkit_expr_parse("x +", 3, &e) != FROBKIT_ERR_PARSE) return 1;
    if (strlen(frobkit_last_error()) == 0) return 1;
    printf("c api ok (%s)\n", frobkit_version());
    return 0;
}

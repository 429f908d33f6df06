#include <stdio.h>
#include <string.h>
#include "tubenull.h"

static const char *THREE_MAPS =
    "{\"schema\": \"ifs.v1\", \"ratio\": \"3/10\","
    " \"translations\": [[\"0\", \"0\"], [\"1\", \"0\"], [\"0\", \"1\"]]}";

int main(void) {
    TnIfs *f = NULL;
    char *cover = NULL, *report = NULL;
    if (tn_ifs_from_json(THREE_MAPS, &f) != TN_STATUS_OK) {
        fprintf(stderr, "parse: %s\n", tn_last_error());
        return 10;
    }
    if (tn_cover_generate(f, 4, 0.95, 0, &cover) != TN_STATUS_OK)
        return 11;
    TnStatus s = tn_cover_verify(f, cover, 0, 0, &report);
    printf("maps=%zu verify=%d passed=%d\n", tn_ifs_len(f), (int)s, strstr(report, "\"passed\": true") != NULL);
    tn_string_free(report);
    tn_string_free(cover);

    if (tn_ifs_from_json("{\"schema\": \"ifs.v1\"}", &f) != TN_STATUS_INVALID_INPUT || f != NULL)
        return 12;
    printf("error=%s\n", tn_last_error() ? "set" : "unset");
    tn_ifs_free(f);
    return 0;
}

/* monoforge — exact local models of morphisms from 3-folds (and surfaces) to
 * surfaces: blowup transforms, resolution invariants, and the monomialization
 * drivers, behind a plain C ABI.
 *
 * Every function returns an mf_status; results are UTF-8 JSON strings owned
 * by the library. Free strings with mf_string_free and handles with the
 * matching *_free call. Handles are opaque and not thread-safe individually;
 * distinct handles may be used from distinct threads.
 */
#ifndef MONOFORGE_H
#define MONOFORGE_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mf_status {
    MF_OK = 0,
    MF_ERR_PARSE = 1,
    MF_ERR_PRECISION_EXHAUSTED = 2,
    MF_ERR_IRRATIONAL_ROOT = 3,
    MF_ERR_NON_UNIT = 4,
    MF_ERR_MALFORMED_GERM = 5,
    MF_ERR_UNIT_CHANGE_REQUIRED = 6,
    MF_ERR_WRONG_FORM = 7,
    MF_ERR_CENTER_NOT_IN_LOCUS = 8,
    MF_ERR_NOT_INVERTIBLE = 9,
    MF_ERR_DEPTH_EXCEEDED = 10,
    MF_ERR_IRRATIONAL_CRITICAL_POINT = 11,
    MF_ERR_UNSUPPORTED_CENTER = 12,
    MF_ERR_INVALID_ARGUMENT = 13,
    MF_ERR_INTERNAL = 14
} mf_status;

typedef struct mf_germ mf_germ;
typedef struct mf_forest mf_forest;

const char* mf_version(void);
const char* mf_status_name(mf_status s);

void mf_string_free(char* s);
void mf_germ_free(mf_germ* g);
void mf_forest_free(mf_forest* f);

/* Parse a germ file (text format; see README). work_precision <= 0 picks the
 * engine default (total degree 24). On failure *err holds a message. */
mf_status mf_germ_parse(const char* text, long work_precision, mf_germ** out, char** err);

/* {point_type, ...} for the germ. */
mf_status mf_germ_classify(const mf_germ* g, char** json_out, char** err);

/* Normalized form plus nu / gamma / tau / leading form. */
mf_status mf_germ_invariants(const mf_germ* g, char** json_out, char** err);

/* Largest s with F in I^s; ideal like "(x,z)" or "(x, z-y^2)". */
mf_status mf_germ_curve_membership(const mf_germ* g, const char* ideal, long* s_out, char** err);

/* Blowup edges. center: "point", "(x,z)", or "(x, z-phi)". translations: a
 * comma-separated list — pairs "a:b" for point centers, single values for
 * curves; may be empty. */
mf_status mf_germ_blowup(const mf_germ* g, const char* center, const char* translations,
                         char** json_out, char** err);

/* Descent inequality checks (multiplicity, tau, gamma bounds) on the edges
 * of one blowup. */
mf_status mf_germ_check_descent(const mf_germ* g, const char* center, const char* translations,
                                char** json_out, char** err);

/* Strongly-prepared classification, good/bad, invertibility case, A/C/I. */
mf_status mf_germ_classify_prepared(const mf_germ* g, char** json_out, char** err);
mf_status mf_germ_good_bad(const mf_germ* g, char** json_out, char** err);
mf_status mf_germ_invertible(const mf_germ* g, char** json_out, char** err);
mf_status mf_germ_invariants_aci(const mf_germ* g, char** json_out, char** err);

/* Chart tree of the 2-variable resolver (germ must use 2 variables). */
mf_status mf_resolve2d(const mf_germ* g, long max_depth, char** json_out, char** err);

mf_status mf_forest_parse(const char* text, long work_precision, mf_forest** out, char** err);
mf_status mf_forest_json(const mf_forest* f, char** json_out, char** err);
mf_status mf_forest_principalize(mf_forest* f, const char* image_point, long max_depth,
                                 char** trace_json, char** err);
mf_status mf_forest_monomialize(mf_forest* f, long max_depth, char** trace_json, char** err);
mf_status mf_forest_toroidalize(mf_forest* f, long max_depth, char** trace_json, char** err);

#ifdef __cplusplus
}
#endif

#endif /* MONOFORGE_H */

/* Shared runtime for generated hypervector classifiers.
 *
 * The including program defines the HD_* configuration macros first.
 * Everything here is static; programs compile as one translation unit.
 * Exit codes: 0 success, 1 usage, 2 bad data.
 */
#ifndef HDC_RUNTIME_H
#define HDC_RUNTIME_H

#include <math.h>
#include <stdint.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>
#include <time.h>

#define HD_FN static __attribute__((unused))

/* SIMD batch of 32-bit lanes; may_alias so batches can view plain
 * int32_t storage. */
typedef int32_t hd_vec __attribute__((vector_size(HD_VECTOR_SIZE), may_alias));

#if HD_INT_FEATURES
typedef long hd_feat_t;
#else
typedef double hd_feat_t;
#endif

#define HD_LINE_CAP (HD_INPUT_DIM * 128 + 16)

/* ---- allocation ----------------------------------------------------- */

/* Zeroed storage aligned to the vector width. The original malloc
 * pointer sits just below the aligned block so hd_free can find it. */
HD_FN void *hd_alloc(size_t nbytes)
{
    size_t align = HD_VECTOR_SIZE;
    unsigned char *raw = malloc(nbytes + align + sizeof(void *));
    uintptr_t base;
    if (raw == NULL) {
        fprintf(stderr, "out of memory\n");
        exit(2);
    }
    base = (uintptr_t)(raw + sizeof(void *));
    base = (base + align - 1) & ~(uintptr_t)(align - 1);
    ((void **)base)[-1] = raw;
    memset((void *)base, 0, nbytes);
    return (void *)base;
}

HD_FN void hd_free(void *p)
{
    if (p != NULL)
        free(((void **)p)[-1]);
}

/* ---- deterministic PRNG --------------------------------------------- */

/* xorshift64-star; the compiler host draws from the identical stream,
 * which is what lets a binary rebuild its tables from just the seed. */
HD_FN uint64_t hd_next(uint64_t *state)
{
    uint64_t s = *state;
    s ^= s >> 12;
    s ^= s << 25;
    s ^= s >> 27;
    *state = s;
    return s * 0x2545F4914F6CDD1DULL;
}

HD_FN uint64_t hd_stream_state(uint64_t seed, uint64_t stream_id)
{
    uint64_t s = seed + 0x9E3779B97F4A7C15ULL * (stream_id + 1ULL);
    return s != 0 ? s : 0x9E3779B97F4A7C15ULL;
}

/* ---- embedding tables ----------------------------------------------- */

/* Rows use the padded stride so every row starts on a vector boundary;
 * padding lanes stay zero and never influence results. */
HD_FN void hd_fill_random(int32_t *rows, long items, uint64_t *state)
{
    long r, j;
    for (r = 0; r < items; ++r)
        for (j = 0; j < HD_DIMENSIONS; ++j)
            rows[r * HD_PAD_DIMS + j] = (hd_next(state) >> 63) == 0 ? 1 : -1;
}

/* Level rows slide from a base row (row 0) to a target row (last row).
 * Row i copies its first cut(i) elements from the target, the rest from
 * the base; cut(i) = round(i*dims/(items-1)) in exact integer math. */
HD_FN void hd_fill_level(int32_t *rows, long items, uint64_t *state)
{
    const int32_t *base, *target;
    long i, cut;
    hd_fill_random(rows, 1, state);
    hd_fill_random(rows + (items - 1) * HD_PAD_DIMS, 1, state);
    base = rows;
    target = rows + (items - 1) * HD_PAD_DIMS;
    for (i = 1; i < items - 1; ++i) {
        cut = (2 * i * HD_DIMENSIONS + (items - 1)) / (2 * (items - 1));
        memcpy(rows + i * HD_PAD_DIMS, target, (size_t)cut * sizeof(int32_t));
        memcpy(rows + i * HD_PAD_DIMS + cut, base + cut,
               (size_t)(HD_DIMENSIONS - cut) * sizeof(int32_t));
    }
}

/* ---- value mapping -------------------------------------------------- */

/* Affine map onto a level index; floor(v + 0.5) then clamp, the exact
 * double expression the compiler host evaluates. */
HD_FN long hd_map_range(double x, double lo, double hi, long levels)
{
    double v = ((x - lo) / (hi - lo)) * (double)(levels - 1);
    double r = floor(v + 0.5);
    if (r < 0.0)
        return 0;
    if (r > (double)(levels - 1))
        return levels - 1;
    return (long)r;
}

/* ---- vector kernels ------------------------------------------------- */

HD_FN void hd_vec_zero(int32_t *a)
{
    memset(a, 0, (size_t)HD_PAD_DIMS * sizeof(int32_t));
}

HD_FN void hd_copy(int32_t *dst, const int32_t *src)
{
    memcpy(dst, src, (size_t)HD_DIMENSIONS * sizeof(int32_t));
}

HD_FN void hd_vec_add(int32_t *acc, const int32_t *a)
{
    hd_vec *va = (hd_vec *)acc;
    const hd_vec *pa = (const hd_vec *)a;
    long j;
    for (j = 0; j < HD_NUM_BATCH; ++j)
        va[j] += pa[j];
}

HD_FN void hd_vec_add2(int32_t *out, const int32_t *a, const int32_t *b)
{
    hd_vec *vo = (hd_vec *)out;
    const hd_vec *pa = (const hd_vec *)a;
    const hd_vec *pb = (const hd_vec *)b;
    long j;
    for (j = 0; j < HD_NUM_BATCH; ++j)
        vo[j] = pa[j] + pb[j];
}

HD_FN void hd_vec_mul(int32_t *out, const int32_t *a, const int32_t *b)
{
    hd_vec *vo = (hd_vec *)out;
    const hd_vec *pa = (const hd_vec *)a;
    const hd_vec *pb = (const hd_vec *)b;
    long j;
    for (j = 0; j < HD_NUM_BATCH; ++j)
        vo[j] = pa[j] * pb[j];
}

/* Fused bind-accumulate: acc += a * b, the hot loop of hash-table style
 * encodings. */
HD_FN void hd_vec_mac(int32_t *acc, const int32_t *a, const int32_t *b)
{
    hd_vec *va = (hd_vec *)acc;
    const hd_vec *pa = (const hd_vec *)a;
    const hd_vec *pb = (const hd_vec *)b;
    long j;
    for (j = 0; j < HD_NUM_BATCH; ++j)
        va[j] += pa[j] * pb[j];
}

/* Right cyclic rotation of the logical lanes: out[(j+k) mod d] = in[j].
 * Padding lanes are never written, so they stay zero. */
HD_FN void hd_rotate(int32_t *out, const int32_t *in, long k)
{
    long k2 = k % HD_DIMENSIONS;
    memcpy(out + k2, in, (size_t)(HD_DIMENSIONS - k2) * sizeof(int32_t));
    memcpy(out, in + (HD_DIMENSIONS - k2), (size_t)k2 * sizeof(int32_t));
}

/* Bipolar clamp over the logical lanes only: > 0 maps to +1, else -1. */
HD_FN void hd_quantize(int32_t *a)
{
    long j;
    for (j = 0; j < HD_DIMENSIONS; ++j)
        a[j] = a[j] > 0 ? 1 : -1;
}

/* ---- associative memory --------------------------------------------- */

/* Counts are unpadded (classes x dims) 64-bit rows; integer adds commute
 * so partial copies can merge in any order. */
HD_FN void hd_mem_update(int64_t *counts, long label, const int32_t *enc)
{
    int64_t *row = counts + label * HD_DIMENSIONS;
    long j;
    for (j = 0; j < HD_DIMENSIONS; ++j)
        row[j] += enc[j];
}

HD_FN void hd_mem_merge(int64_t *counts, const int64_t *partial)
{
    long i;
    for (i = 0; i < (long)HD_CLASSES * HD_DIMENSIONS; ++i)
        counts[i] += partial[i];
}

HD_FN void hd_mem_norms(const int64_t *counts, double *norms)
{
    long c, j;
    for (c = 0; c < HD_CLASSES; ++c) {
        int64_t ss = 0;
        const int64_t *row = counts + c * HD_DIMENSIONS;
        for (j = 0; j < HD_DIMENSIONS; ++j)
            ss += row[j] * row[j];
        norms[c] = sqrt((double)ss);
    }
}

/* Score = integer dot / row norm; both dots are exact, the one division
 * is reproduced bit for bit by the compiler host. Ties pick the lowest
 * class; an untrained (zero) row scores 0. */
HD_FN long hd_mem_classify(const int64_t *counts, const double *norms, const int32_t *enc)
{
    long best = 0;
    double best_score = -HUGE_VAL;
    long c, j;
    for (c = 0; c < HD_CLASSES; ++c) {
        const int64_t *row = counts + c * HD_DIMENSIONS;
        int64_t dot = 0;
        double score;
        for (j = 0; j < HD_DIMENSIONS; ++j)
            dot += row[j] * enc[j];
        score = norms[c] == 0.0 ? 0.0 : (double)dot / norms[c];
        if (score > best_score) {
            best = c;
            best_score = score;
        }
    }
    return best;
}

/* FNV-1a 64 over the counts, row-major, each value fed LSB-first. */
HD_FN uint64_t hd_digest(const int64_t *counts)
{
    uint64_t h = 0xCBF29CE484222325ULL;
    long i;
    int b;
    for (i = 0; i < (long)HD_CLASSES * HD_DIMENSIONS; ++i) {
        uint64_t v = (uint64_t)counts[i];
        for (b = 0; b < 8; ++b)
            h = (h ^ ((v >> (8 * b)) & 0xFFu)) * 0x100000001B3ULL;
    }
    return h;
}

/* ---- data readers --------------------------------------------------- */

HD_FN void hd_data_fail(const char *path, long line, const char *msg)
{
    fprintf(stderr, "%s:%ld: %s\n", path, line, msg);
    exit(2);
}

HD_FN FILE *hd_open(const char *path)
{
    FILE *f = fopen(path, "r");
    if (f == NULL) {
        fprintf(stderr, "%s: cannot open\n", path);
        exit(2);
    }
    return f;
}

/* One full line into buf, stripped of the newline; rejects blank lines
 * and lines past the fixed capacity. */
HD_FN void hd_read_line(FILE *f, const char *path, long line_no, char *buf, size_t cap)
{
    size_t len;
    if (fgets(buf, (int)cap, f) == NULL)
        hd_data_fail(path, line_no, "unexpected end of file");
    len = strlen(buf);
    if (len + 1 == cap && buf[len - 1] != '\n')
        hd_data_fail(path, line_no, "line too long");
    while (len > 0 && (buf[len - 1] == '\n' || buf[len - 1] == '\r'))
        buf[--len] = '\0';
    if (len == 0)
        hd_data_fail(path, line_no, "blank line");
}

#if HD_INT_FEATURES

/* Integer index row; -1 is the skip sentinel, anything else must index
 * inside the weight table. */
HD_FN void hd_read_row(FILE *f, const char *path, long line_no, char *buf, hd_feat_t *out)
{
    const char *p = buf;
    char *end;
    long i;
    hd_read_line(f, path, line_no, buf, HD_LINE_CAP);
    for (i = 0; i < HD_INPUT_DIM; ++i) {
        long v;
        if (i > 0) {
            if (*p != ',')
                hd_data_fail(path, line_no, "expected ','");
            ++p;
        }
        v = strtol(p, &end, 10);
        if (end == p)
            hd_data_fail(path, line_no, "not an integer");
        if (v < -1 || v >= HD_WEIGHT_ITEMS)
            hd_data_fail(path, line_no, "index outside the weight table");
        out[i] = v;
        p = end;
    }
    if (*p != '\0')
        hd_data_fail(path, line_no, "wrong field count");
}

HD_FN long hd_active(const hd_feat_t *row, long *act)
{
    long i, n = 0;
    for (i = 0; i < HD_INPUT_DIM; ++i)
        if (row[i] != -1)
            act[n++] = i;
    return n;
}

#else /* real-valued features */

HD_FN void hd_read_row(FILE *f, const char *path, long line_no, char *buf, hd_feat_t *out)
{
    const char *p = buf;
    char *end;
    long i;
    hd_read_line(f, path, line_no, buf, HD_LINE_CAP);
    for (i = 0; i < HD_INPUT_DIM; ++i) {
        double v;
        if (i > 0) {
            if (*p != ',')
                hd_data_fail(path, line_no, "expected ','");
            ++p;
        }
        v = strtod(p, &end);
        if (end == p)
            hd_data_fail(path, line_no, "not a number");
        if (!isfinite(v))
            hd_data_fail(path, line_no, "non-finite value");
        out[i] = v;
        p = end;
    }
    if (*p != '\0')
        hd_data_fail(path, line_no, "wrong field count");
}

HD_FN long hd_active(const hd_feat_t *row, long *act)
{
    long i;
    (void)row;
    for (i = 0; i < HD_INPUT_DIM; ++i)
        act[i] = i;
    return HD_INPUT_DIM;
}

#endif /* HD_INT_FEATURES */

HD_FN long hd_read_label(FILE *f, const char *path, long line_no)
{
    char buf[64];
    char *end;
    long v;
    hd_read_line(f, path, line_no, buf, sizeof buf);
    v = strtol(buf, &end, 10);
    if (end == buf || *end != '\0')
        hd_data_fail(path, line_no, "not an integer label");
    if (v < 0 || v >= HD_CLASSES)
        hd_data_fail(path, line_no, "label outside the class range");
    return v;
}

/* ---- timing --------------------------------------------------------- */

#if HD_PARALLEL
HD_FN double hd_now(void)
{
    struct timespec ts;
    clock_gettime(CLOCK_MONOTONIC, &ts);
    return (double)ts.tv_sec + (double)ts.tv_nsec * 1e-9;
}
#else
HD_FN double hd_now(void)
{
    return (double)clock() / (double)CLOCKS_PER_SEC;
}
#endif

#endif /* HDC_RUNTIME_H */

#ifndef SENTIKIT_SENTIKIT_H
#define SENTIKIT_SENTIKIT_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define SK_API __declspec(dllexport)
#else
#define SK_API __attribute__((visibility("default")))
#endif

/* Status codes double as CLI exit codes. */
typedef enum sk_status {
  SK_OK = 0,
  SK_ERR_USAGE = 1,
  SK_ERR_DATA = 2,
  SK_ERR_TRAIN = 3,
  SK_ERR_MODEL = 4,
  SK_ERR_INTERNAL = 5
} sk_status;

typedef struct sk_config sk_config;
typedef struct sk_model sk_model;

enum { SK_NUM_CLASSES = 3 };

/* Label indices: 0 negative, 1 positive, 2 neutral. */
typedef struct sk_prediction {
  int label;
  double probs[SK_NUM_CLASSES];
  int degenerate; /* 1 when nothing survived preprocessing */
} sk_prediction;

SK_API const char *sk_version(void);
/* Message for the last failure on the calling thread; never NULL. */
SK_API const char *sk_last_error(void);
/* Frees strings returned through char** out-parameters. */
SK_API void sk_string_free(char *s);
SK_API const char *sk_label_name(int label);

SK_API sk_status sk_config_new(sk_config **out);
SK_API sk_status sk_config_load(const char *path, sk_config **out);
/* Dotted key such as "lstm.epochs"; value is a JSON literal, or raw text for
   string-valued keys. */
SK_API sk_status sk_config_set(sk_config *cfg, const char *key, const char *value);
SK_API sk_status sk_config_to_json(const sk_config *cfg, char **out);
SK_API void sk_config_free(sk_config *cfg);

/* Class distribution of the configured dataset, as a table or JSON. */
SK_API sk_status sk_stats(const sk_config *cfg, int as_json, char **out);
/* Writes one JSON token array per record of in_csv to out_jsonl. */
SK_API sk_status sk_preprocess_file(const sk_config *cfg, const char *in_csv, const char *out_jsonl, size_t *records);
/* Full pipeline on one text; out is a JSON array of tokens. */
SK_API sk_status sk_preprocess_text(const sk_config *cfg, const char *text, char **out);
/* Stems one word; with trace set, out lists every rule application. */
SK_API sk_status sk_stem(const sk_config *cfg, const char *word, int trace, char **out);

/* model: "nb", "lr", "rf" or "lstm". out receives a JSON summary. */
SK_API sk_status sk_train(const sk_config *cfg, const char *model, char **out);
/* models_csv such as "nb,lr" (NULL or "" for all four); cv 0 means the
   held-out split, cv >= 2 runs stratified k-fold. */
SK_API sk_status sk_compare(const sk_config *cfg, const char *models_csv, size_t cv, char **out);

/* resource_dir NULL or "" resolves like the config's resources key. */
SK_API sk_status sk_model_load(const char *path, const char *resource_dir, sk_model **out);
SK_API sk_status sk_model_predict(const sk_model *model, const char *text, sk_prediction *out);
SK_API const char *sk_model_kind(const sk_model *model);
SK_API void sk_model_free(sk_model *model);

#ifdef __cplusplus
}
#endif

#endif

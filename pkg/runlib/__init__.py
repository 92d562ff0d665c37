# labels for sub-seeding the session streams
INPUT_SHARE_LABEL = 'input-shares'

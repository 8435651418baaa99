#include "audio_server.h"

// audio_server

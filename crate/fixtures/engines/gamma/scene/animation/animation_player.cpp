#include "animation_player.h"
#include "servers/audio/audio_server.h"

// animation_player

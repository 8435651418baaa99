#include "Player.h"
#include <Engine/Physics/RigidBody.h>
#include <Engine/Graphics/Particles/Emitter.h>

// Player

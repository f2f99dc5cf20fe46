/** Local identity: favorites need a user id and there is no auth, so a
 * random string is minted on first visit and kept in localStorage. */

const USER_KEY = "gene-atlas-user";

export function userId(): string {
  let id = localStorage.getItem(USER_KEY);
  if (!id) {
    const bytes = new Uint8Array(12);
    crypto.getRandomValues(bytes);
    id = Array.from(bytes, (b) => b.toString(16).padStart(2, "0")).join("");
    localStorage.setItem(USER_KEY, id);
  }
  return id;
}
